import os

import numpy as np

# named random sub-streams, so that every stage of a run can be reproduced
# on its own from the single --seed given on the command line
STREAMS = {'generation': 0, 'sampling': 1, 'cv': 2, 'permutation': 3}


def stream_seed(seed, stream, *index):
    """Derive the integer seed of a named random sub-stream.
    :param seed:   the master seed (non-negative integer).
    :param stream: one of the keys of STREAMS.
    :param index:  optional integers further splitting the stream, e.g. the
                   position of a graph inside a collection.
    :return:       a 32 bit integer seed, equal for equal arguments.
    """
    if stream not in STREAMS:
        raise ValueError('unknown random stream {}'.format(stream))
    if not isinstance(seed, (int, np.integer)) or seed < 0:
        raise ValueError('seed must be a non-negative integer')
    entropy = [int(seed), STREAMS[stream]] + [int(i) for i in index]
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])


def resolve_workers(worker_count='auto'):
    """Number of joblib workers: 'auto' uses every available core."""
    if worker_count == 'auto':
        return os.cpu_count() or 1
    if not isinstance(worker_count, (int, np.integer)) or worker_count < 1:
        raise ValueError('worker_count must be a positive integer or auto')
    return int(worker_count)


def tu_prefix(name, path=None):
    """Path prefix of a TU benchmark dataset shipped under graphs/data, e.g.
    graphs/data/MUTAG/MUTAG, so that <prefix>_A.txt is its adjacency file."""
    if path is None:
        path = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'graphs', 'data')
    return os.path.join(path, name, name)


def has_tu_dataset(prefix):
    return all(os.path.isfile(prefix + suffix)
               for suffix in ('_A.txt', '_graph_indicator.txt', '_graph_labels.txt'))


def load_tu(name, path=None):
    from graphs.graph import read_tu_collection

    prefix = tu_prefix(name, path)
    if not has_tu_dataset(prefix):
        raise ValueError('unknown TU dataset {} (looked for {}_A.txt)'.format(name, prefix))
    return read_tu_collection(prefix)
