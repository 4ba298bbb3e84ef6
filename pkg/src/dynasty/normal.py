"""Standard normal pdf/cdf via a fixed rational approximation.

A self-contained evaluation (no libm erfc, no scipy) so that every decision
made by the solvers is a pure function of these coefficients.  The cumulative
uses the Hart rational approximation in the central range and a continued
fraction in the tail, which keeps full double-precision *relative* accuracy
down to the underflow region (~1e-300).  Tail accuracy matters: the survival
model compares success probabilities that differ only past the 15th decimal.

Absolute error is below 1e-14 everywhere; relative tail error is ~1e-14.
"""

import math

INV_SQRT_2PI = 0.3989422804014326779399460599343819
SQRT_2PI = 2.506628274631000502415765284811045

_TAIL_SPLIT = 7.07106781186547
_UNDERFLOW = 37.0


def norm_pdf(z: float) -> float:
    """Density of the standard normal at z."""
    return INV_SQRT_2PI * math.exp(-0.5 * z * z)


def norm_cdf(z: float) -> float:
    """P(Z <= z) for a standard normal Z."""
    x = abs(z)
    if x > _UNDERFLOW:
        tail = 0.0
    elif x < _TAIL_SPLIT:
        e = math.exp(-0.5 * x * x)
        num = 3.52624965998911e-02
        num = num * x + 0.700383064443688
        num = num * x + 6.37396220353165
        num = num * x + 33.912866078383
        num = num * x + 112.079291497871
        num = num * x + 221.213596169931
        num = num * x + 220.206867912376
        den = 8.83883476483184e-02
        den = den * x + 1.75566716318264
        den = den * x + 16.064177579207
        den = den * x + 86.7807322029461
        den = den * x + 296.564248779674
        den = den * x + 637.333633378831
        den = den * x + 793.826512519948
        den = den * x + 440.413735824752
        tail = e * num / den
    else:
        e = math.exp(-0.5 * x * x)
        frac = x + 0.65
        frac = x + 4.0 / frac
        frac = x + 3.0 / frac
        frac = x + 2.0 / frac
        frac = x + 1.0 / frac
        tail = e / (SQRT_2PI * frac)
    return 1.0 - tail if z > 0.0 else tail
