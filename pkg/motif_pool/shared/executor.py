# Licensed under AGPL v3 or later

from concurrent.futures import ProcessPoolExecutor


class RunTask(object):
    """
    One unit of seed-level work: ``function(*args)`` labelled for announcement.

    ``function`` must be a module-level callable so it pickles for workers.
    """
    def __init__(self, label, function, *args):
        self.label = label
        self.function = function
        self.args = args

    def __call__(self):
        return self.function(*self.args)


def _call_task(task):
    return task()


class Executor(object):
    def __init__(self, messenger, workers=1):
        if workers < 1:
            raise ValueError('Number of workers must be positive, got %d' % workers)
        self._messenger = messenger
        self._workers = workers

    @property
    def workers(self):
        return self._workers

    def map(self, tasks):
        """
        Runs all tasks and returns their results in task order,
        regardless of the number of workers or completion order.
        """
        tasks = list(tasks)
        for task in tasks:
            self._messenger.announce_run(task.label)

        if self._workers == 1 or len(tasks) <= 1:
            return [task() for task in tasks]

        with ProcessPoolExecutor(max_workers=min(self._workers, len(tasks))) as pool:
            return list(pool.map(_call_task, tasks))
