import concurrent.futures
import contextvars
import sys
import time

import gridramsey
from gridramsey.streams import derive_seed

# Build many seeded rectangle-free grid subgraphs on a thread pool and check
# that the threaded batch reproduces the sequential one exactly.

# The per-seed work is pure Python, so threads mostly overlap the gmpy2
# bitset operations; the point of the demo is reproducibility, not speed.

def create_seeds(count = 64, master = 42):
    return [derive_seed(master, "demo", i) for i in range(count)]

# One construction; returns the elapsed time, the index and a fingerprint of
# the coloring.
def build_one(index, params, seed):
    start = time.time()
    res = gridramsey.build_grid_lower(params, seed)
    return time.time() - start, index, hash(res.h)

def run_sequential(params, seeds):
    start = time.time()
    results = [build_one(i, params, s) for i, s in enumerate(seeds)]
    return time.time() - start, [r[2] for r in results]

# Every task runs in a copy of the caller's context, so a local_context()
# around the call applies to the workers too.
def run_threaded(params, seeds, threads):
    fingerprints = [None] * len(seeds)
    total_thread_time = 0
    walltime_start = time.time()
    executor = concurrent.futures.ThreadPoolExecutor(max_workers = threads)
    with executor:
        tasks = []
        for index, seed in enumerate(seeds):
            tasks.append(executor.submit(contextvars.copy_context().run,
                                         build_one, index, params, seed))
        for task in concurrent.futures.as_completed(tasks):
            elapsed, index, fingerprint = task.result()
            total_thread_time += elapsed
            fingerprints[index] = fingerprint
    return time.time() - walltime_start, total_thread_time, fingerprints

if __name__ == "__main__":
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 64
    params = gridramsey.ParamSchedule.desk(n, n)
    seeds = create_seeds()

    with gridramsey.local_context(thinning_policy='clamp'):
        baseline, expected = run_sequential(params, seeds)
        print("Sequential:", round(baseline, 3))
        for threads in (2, 4, 8):
            walltime, thread_time, got = run_threaded(params, seeds, threads)
            print("Threads:", threads, "walltime:", round(walltime, 3),
                  "thread time:", round(thread_time, 3),
                  "identical:", got == expected)
