"""Built-in Lagrange-Good instances and their independent oracles

Fixtures are computed from closed forms or recurrences, never from the
inversion engine:
  - catalan:        phi = u, f = 1/(1-u). [x^k] g = Catalan(k-1) (convolution
                    recurrence); both identity sides equal C(2k-2, k-1).
  - cayley:         phi = u, f = e^u. [x^k] g = k^(k-1)/k!; both identity sides
                    equal k^(k-1)/(k-1)!.
  - bivariate-pair: phi = 1, f_1 = 1+u_2, f_2 = 1+u_1. Both identity sides equal
                    C(k2,k1) C(k1,k2); [x^k] g_1 = 1 iff k1 >= 1 and k2 in {k1-1, k1}.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Dict, List, Tuple

from ..core.errors import ConfigError
from ..models.inversion import SeriesSystem
from ..models.series import MultiIndex, Series

logger = logging.getLogger(__name__)


def catalan_numbers(count: int) -> List[int]:
    """c_0..c_(count-1) from c_m = sum c_i c_(m-1-i)"""
    values: List[int] = []
    for m in range(count):
        if m == 0:
            values.append(1)
        else:
            values.append(sum(values[i] * values[m - 1 - i] for i in range(m)))
    return values


def catalan_g_coefficient(k: MultiIndex) -> Fraction:
    (degree,) = k
    return Fraction(catalan_numbers(degree)[degree - 1]) if degree >= 1 else Fraction(0)


def catalan_identity_coefficient(k: MultiIndex) -> Fraction:
    (degree,) = k
    return Fraction(comb(2 * degree - 2, degree - 1)) if degree >= 1 else Fraction(0)


def cayley_g_coefficient(k: MultiIndex) -> Fraction:
    (degree,) = k
    return Fraction(degree ** (degree - 1), factorial(degree)) if degree >= 1 else Fraction(0)


def cayley_identity_coefficient(k: MultiIndex) -> Fraction:
    (degree,) = k
    return Fraction(degree ** (degree - 1), factorial(degree - 1)) if degree >= 1 else Fraction(0)


def pair_identity_coefficient(k: MultiIndex) -> Fraction:
    k1, k2 = k
    return Fraction(comb(k2, k1) * comb(k1, k2))


def pair_g_coefficient(k: MultiIndex) -> Fraction:
    k1, k2 = k
    return Fraction(1 if k1 >= 1 and k2 in (k1 - 1, k1) else 0)


def geometric_system(order: int) -> SeriesSystem:
    f = Series(1, order, {(e,): 1 for e in range(order + 1)})
    return SeriesSystem(Series(1, order, {(1,): 1}), (f,))


def exponential_system(order: int) -> SeriesSystem:
    f = Series(1, order, {(e,): Fraction(1, factorial(e)) for e in range(order + 1)})
    return SeriesSystem(Series(1, order, {(1,): 1}), (f,))


def pair_system(order: int) -> SeriesSystem:
    f1 = Series(2, order, {(0, 0): 1, (0, 1): 1})
    f2 = Series(2, order, {(0, 0): 1, (1, 0): 1})
    return SeriesSystem(Series(2, order, {(0, 0): 1}), (f1, f2))


@dataclass(frozen=True)
class Demo:
    name: str
    description: str
    n: int
    default_order: int
    default_x: Tuple[float, ...]
    radius: float  # radius of convergence of the left-hand series
    build: Callable[[int], SeriesSystem]
    identity_coefficient: Callable[[MultiIndex], Fraction]
    g_coefficient: Callable[[MultiIndex], Fraction]


DEMOS: Dict[str, Demo] = {
    "catalan": Demo(
        name="catalan",
        description="Plane trees: g = x/(1-g), phi = u; [x^k] g are Catalan numbers",
        n=1,
        default_order=10,
        default_x=(0.1,),
        radius=0.25,
        build=geometric_system,
        identity_coefficient=catalan_identity_coefficient,
        g_coefficient=catalan_g_coefficient,
    ),
    "cayley": Demo(
        name="cayley",
        description="Rooted labelled trees: g = x e^g, phi = u; [x^k] g = k^(k-1)/k!",
        n=1,
        default_order=8,
        default_x=(0.1,),
        radius=0.36787944117144233,
        build=exponential_system,
        identity_coefficient=cayley_identity_coefficient,
        g_coefficient=cayley_g_coefficient,
    ),
    "bivariate-pair": Demo(
        name="bivariate-pair",
        description="Coupled pair g_1 = x_1(1+g_2), g_2 = x_2(1+g_1), phi = 1",
        n=2,
        default_order=6,
        default_x=(0.05, 0.05),
        radius=1.0,
        build=pair_system,
        identity_coefficient=pair_identity_coefficient,
        g_coefficient=pair_g_coefficient,
    ),
}


class DemoService:
    """Catalogue des instances de démonstration"""

    def list_demos(self) -> List[Demo]:
        return list(DEMOS.values())

    def get(self, name: str) -> Demo:
        demo = DEMOS.get(name)
        if demo is None:
            raise ConfigError(f"unknown demo '{name}' (available: {', '.join(DEMOS)})")
        return demo

    def build(self, name: str, order: int) -> SeriesSystem:
        if order < 0:
            raise ConfigError(f"order must be >= 0, got {order}")
        return self.get(name).build(order)


demo_service = DemoService()
