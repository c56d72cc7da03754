from concurrent.futures import ThreadPoolExecutor


def ordered_map(fn, items, workers=1):
    """map() over a thread pool; results keep the order of `items` whatever the worker count."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
