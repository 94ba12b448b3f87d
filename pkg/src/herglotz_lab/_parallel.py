"""Order-preserving map over a thread pool capped by HERGLOTZ_LAB_THREADS."""

from concurrent.futures import ThreadPoolExecutor

from . import config


def pmap(fn, items):
    items = list(items)
    workers = min(config.max_threads(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))
