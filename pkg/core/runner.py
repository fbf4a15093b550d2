"""
有序并发执行器
在线程池中并发运行无参可调用对象，按输入顺序返回结果
"""
import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, List, Sequence

logger = logging.getLogger(__name__)


async def run_ordered(tasks: Sequence[Callable[[], Any]], max_workers: int = 4) -> List[Any]:
    """并发运行 tasks，结果顺序与输入一致

    任一任务抛出的异常会原样传播给调用方。
    """
    if not tasks:
        return []
    max_workers = max(1, int(max_workers))
    loop = asyncio.get_running_loop()
    semaphore = asyncio.Semaphore(max_workers)

    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        async def _run(index: int, task: Callable[[], Any]) -> Any:
            async with semaphore:
                logger.debug(f"Running task {index + 1}/{len(tasks)}")
                return await loop.run_in_executor(executor, task)

        results = await asyncio.gather(*(_run(i, t) for i, t in enumerate(tasks)))

    return list(results)


def run_ordered_sync(tasks: Sequence[Callable[[], Any]], max_workers: int = 4) -> List[Any]:
    """run_ordered 的同步包装，供库调用方使用"""
    return asyncio.run(run_ordered(tasks, max_workers))
