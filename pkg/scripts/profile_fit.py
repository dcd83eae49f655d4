import cProfile
import datetime
import pstats
import sys

import pybsq
from pybsq.data import SyntheticSpec, generate
from pybsq.trainer import TrainConfig, fit

if __name__ == '__main__':
    variant = sys.argv[1] if len(sys.argv) > 1 else 'bsq'

    data = generate(SyntheticSpec(10000, 100, seed=0))
    config = TrainConfig(k=512, variant=variant, epochs=10, seed=0)

    # Compile the kernels before profiling
    fit(data[:100], TrainConfig(k=4, variant=variant, epochs=1))

    start = datetime.datetime.now()
    profile = cProfile.Profile()
    report = profile.runcall(fit, data, config)
    end = datetime.datetime.now()
    print('pyBSQ', pybsq.__version__, 'sgd-' + variant)
    print('Duration:', end - start)
    print('Max distance:', report.max_distance)

    pstats.Stats(profile).sort_stats('cumulative').print_stats(20)
