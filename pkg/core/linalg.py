"""
精确线性代数
无分式 Bareiss 行列式（适用于任意精确整环）和有理数域上的 Gauss-Jordan 求解
"""
import logging
import operator
from fractions import Fraction
from typing import Any, Callable, List, Optional, Sequence

logger = logging.getLogger(__name__)


def bareiss_det(matrix: Sequence[Sequence[Any]],
                exact_div: Callable[[Any, Any], Any] = operator.truediv,
                one: Any = 1) -> Any:
    """Bareiss 消元求行列式

    每一步的除法都是精确的，所以矩阵元素可以是多项式；
    exact_div 必须实现环中的精确除法（Fraction/RatFun 用普通除法即可）。
    """
    rows = [list(row) for row in matrix]
    n = len(rows)
    if n == 0:
        return one
    for row in rows:
        if len(row) != n:
            raise ValueError("bareiss_det needs a square matrix")

    sign = 1
    prev = one
    for k in range(n - 1):
        if not rows[k][k]:
            # 选主元：找下方第一个非零元素所在的行
            pivot = next((r for r in range(k + 1, n) if rows[r][k]), None)
            if pivot is None:
                return rows[k][k] * 0
            rows[k], rows[pivot] = rows[pivot], rows[k]
            sign = -sign
        pivot_value = rows[k][k]
        for i in range(k + 1, n):
            row_i = rows[i]
            factor = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = exact_div(row_i[j] * pivot_value - factor * rows[k][j], prev)
        prev = pivot_value

    det = rows[n - 1][n - 1]
    return det if sign > 0 else -det


def solve_linear(matrix: Sequence[Sequence[Fraction]],
                 rhs: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """Gauss-Jordan 消元

    返回一组解（自由变量取 0）；方程组不相容时返回 None。
    """
    n_rows = len(matrix)
    n_cols = len(matrix[0]) if n_rows else 0
    aug = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]

    pivot_cols: List[int] = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if aug[i][c]), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(n_rows):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [vi - f * vr for vi, vr in zip(aug[i], aug[r])]
        pivot_cols.append(c)
        r += 1
        if r == n_rows:
            break

    # 剩余行若右端非零则无解
    for i in range(r, n_rows):
        if aug[i][n_cols]:
            logger.debug("Linear system is inconsistent (row %d)", i)
            return None

    solution = [Fraction(0)] * n_cols
    for row_index, c in enumerate(pivot_cols):
        solution[c] = aug[row_index][n_cols]
    return solution
