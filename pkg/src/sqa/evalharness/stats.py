"""Agreement and significance statistics for evaluation reports.

Quadratic-weighted Cohen's kappa:

                sum_ij w_ij * O_ij
    kappa = 1 - ------------------ ,   w_ij = (i - j)^2 / (k - 1)^2
                sum_ij w_ij * E_ij

with O the observed proportion matrix over rating pairs and E the outer
product of the two raters' marginal distributions. Identical rating
vectors give exactly 1. When the expected weighted disagreement is zero
(both raters constant on the same category, or k = 1), the observed
disagreement is necessarily zero too and kappa is defined as 1.

Mann-Whitney U (unpaired, two-tailed): U is computed by midrank sums.
The p-value is exact, by dynamic-programming enumeration of the U
distribution, when n1*n2 <= 400 and there are no ties; otherwise a
normal approximation with tie correction and a 0.5 continuity
correction is used. U_x + U_y = n1*n2 always holds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import EvalInputError

EXACT_MAX_PRODUCT = 400


@dataclass(frozen=True)
class AgreementResult:
    kappa: float
    observed_disagreement: float
    expected_disagreement: float
    categories: int

    def to_json(self) -> dict:
        return {
            "kappa": self.kappa,
            "observed_disagreement": self.observed_disagreement,
            "expected_disagreement": self.expected_disagreement,
            "categories": self.categories,
        }


@dataclass(frozen=True)
class StatTestResult:
    u: float
    p_value: float
    alpha: float
    significant: bool
    method: str  # "exact" | "normal_approx"

    def __post_init__(self):
        assert self.significant == (self.p_value < self.alpha)

    def to_json(self) -> dict:
        return {
            "u": self.u,
            "p_value": self.p_value,
            "alpha": self.alpha,
            "significant": self.significant,
            "method": self.method,
        }


def weighted_kappa(a: Sequence[int], b: Sequence[int], k: int) -> AgreementResult:
    if len(a) != len(b):
        raise EvalInputError(f"rating vectors differ in length: {len(a)} vs {len(b)}")
    if not a:
        raise EvalInputError("rating vectors must be non-empty")
    if k < 1:
        raise EvalInputError(f"category count must be >= 1, got {k}")
    for vec_name, vec in (("a", a), ("b", b)):
        for r in vec:
            if not isinstance(r, (int, np.integer)) or isinstance(r, bool) or not 1 <= r <= k:
                raise EvalInputError(f"rating {r!r} in {vec_name} outside 1..{k}")

    n = len(a)
    observed = np.zeros((k, k), dtype=float)
    for ra, rb in zip(a, b):
        observed[ra - 1, rb - 1] += 1.0
    observed /= n
    marg_a = observed.sum(axis=1)
    marg_b = observed.sum(axis=0)
    expected = np.outer(marg_a, marg_b)

    if k == 1:
        weights = np.zeros((1, 1))
    else:
        idx = np.arange(k, dtype=float)
        weights = (idx[:, None] - idx[None, :]) ** 2 / (k - 1) ** 2

    obs_dis = float((weights * observed).sum())
    exp_dis = float((weights * expected).sum())
    if exp_dis == 0.0:
        # Only reachable when both raters are constant on one shared
        # category (or k == 1); the observed disagreement is 0 there.
        kappa = 1.0
    else:
        kappa = 1.0 - obs_dis / exp_dis
    if list(a) == list(b):
        kappa = 1.0  # keep perfect agreement exact despite float division
    return AgreementResult(
        kappa=kappa,
        observed_disagreement=obs_dis,
        expected_disagreement=exp_dis,
        categories=k,
    )


def _midranks(values: list[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        rank = (i + j) / 2 + 1  # average of 1-based positions i..j
        for pos in range(i, j + 1):
            ranks[order[pos]] = rank
        i = j + 1
    return ranks


def _exact_u_counts(n1: int, n2: int) -> list[int]:
    """count[u] = number of x/y arrangements whose U statistic equals u.

    Recurrence on the largest remaining observation: if it belongs to x
    it beats all j remaining ys, otherwise it contributes nothing:

        f(i, j, u) = f(i-1, j, u-j) + f(i, j-1, u)

    with f(0, j, 0) = f(i, 0, 0) = 1.
    """
    max_u = n1 * n2
    f = [[None] * (n2 + 1) for _ in range(n1 + 1)]
    for j in range(n2 + 1):
        f[0][j] = [1] + [0] * max_u
    for i in range(1, n1 + 1):
        row = f[i]
        row[0] = [1] + [0] * max_u
        for j in range(1, n2 + 1):
            counts = [0] * (max_u + 1)
            x_branch = f[i - 1][j]
            y_branch = row[j - 1]
            for u in range(i * j + 1):
                c = y_branch[u]
                if u >= j:
                    c += x_branch[u - j]
                counts[u] = c
            row[j] = counts
    return f[n1][n2]


def mann_whitney_u(
    x: Sequence[float], y: Sequence[float], alpha: float = 0.05
) -> StatTestResult:
    if not x or not y:
        raise EvalInputError("both samples must be non-empty")
    n1, n2 = len(x), len(y)
    combined = list(x) + list(y)
    ranks = _midranks(combined)
    rank_sum_x = sum(ranks[:n1])
    u_x = rank_sum_x - n1 * (n1 + 1) / 2
    u_y = n1 * n2 - u_x

    has_ties = len(set(combined)) != len(combined)
    if not has_ties and n1 * n2 <= EXACT_MAX_PRODUCT:
        counts = _exact_u_counts(n1, n2)
        total = math.comb(n1 + n2, n1)
        u_low = int(round(min(u_x, u_y)))
        tail = sum(counts[: u_low + 1])
        p = min(1.0, 2.0 * tail / total)
        method = "exact"
    else:
        mean = n1 * n2 / 2
        n = n1 + n2
        tie_groups: dict[float, int] = {}
        for v in combined:
            tie_groups[v] = tie_groups.get(v, 0) + 1
        tie_term = sum(t**3 - t for t in tie_groups.values())
        variance = n1 * n2 / 12 * ((n + 1) - tie_term / (n * (n - 1)))
        if variance <= 0:
            p = 1.0
        else:
            z = max(0.0, abs(u_x - mean) - 0.5) / math.sqrt(variance)
            p = min(1.0, math.erfc(z / math.sqrt(2)))
        method = "normal_approx"

    return StatTestResult(
        u=u_x,
        p_value=p,
        alpha=alpha,
        significant=p < alpha,
        method=method,
    )
