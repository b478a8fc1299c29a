from nlpot.executors import SyncExecutor
from nlpot.experiments import Pipeline


def sample(rng):
    return rng.normal(size=100)


def mean(rng, values):
    return float(values.mean())


def main():
    pipeline = Pipeline()
    pipeline.add("sample", sample)
    pipeline.add("mean", mean, depends_on=["sample"], emits=True)
    solved = pipeline.solve()
    first = solved.execute_sync(SyncExecutor(), seed=0)
    second = solved.execute_sync(SyncExecutor(), seed=0)
    assert first["mean"] == second["mean"]
