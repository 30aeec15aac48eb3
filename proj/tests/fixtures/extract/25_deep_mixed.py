import os


class Pipeline:
    """Runs steps."""

    registry = {}

    def __init__(self):
        self.steps = []

    def add(self, fn):
        def bound(*args):
            return fn(self, *args)
        self.steps.append(bound)
        return bound

    class Step:
        def run(self):
            raise NotImplementedError


def build_pipeline(config):
    pipeline = Pipeline()

    def finalize():
        return pipeline

    return finalize


async def drive(pipeline):
    for step in pipeline.steps:
        step()
