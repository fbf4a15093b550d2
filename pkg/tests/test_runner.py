import asyncio
import functools
import time

import pytest

from core.error_handler import MathError
from core.runner import run_ordered, run_ordered_sync


def _slow_square(x, delay):
    time.sleep(delay)
    return x * x


def test_results_keep_input_order():
    # 先提交的任务睡得更久，完成顺序与输入相反
    tasks = [functools.partial(_slow_square, x, 0.05 * (4 - x)) for x in range(5)]
    assert asyncio.run(run_ordered(tasks, max_workers=5)) == [0, 1, 4, 9, 16]


def test_empty_and_single_worker():
    assert asyncio.run(run_ordered([])) == []
    tasks = [functools.partial(_slow_square, x, 0) for x in range(3)]
    assert run_ordered_sync(tasks, max_workers=0) == [0, 1, 4]


def test_exceptions_propagate():
    def boom():
        raise MathError("bad specialization")

    with pytest.raises(MathError):
        run_ordered_sync([functools.partial(_slow_square, 2, 0), boom])
