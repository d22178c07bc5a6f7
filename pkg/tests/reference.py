"""Frozen reference values from independent computations.

Ray-zero moduli: mpmath.findroot on t -> U(t e^{i pi/3}) with mpmath's
airyai/airybi at 40 digits.  Bi zeros: mpmath.findroot on airybi.
Series constants: closed form sum_{k>=1} 1/(k^2 - a^2) = 1/(2a^2) - pi cot(pi a)/(2a)
and mpmath.nsum for the squared series, both at 40 digits.
"""

ALPHA = (
    2.6663526904069378807,
    4.3424775680395573837,
    5.7410288161122397886,
    6.9861423742603472432,
    8.1287791262163002869,
)
BETA = (
    1.9863527074304728135,
    3.8253391911604526482,
    5.2956211368427558615,
    6.5843078684860809411,
    7.7573206393945231975,
)

C_1 = 1.37674246904171650505853705093512325021
C_2 = 2.569373499444945748700128633659168492531

BI_ZERO_1 = complex(0.977544886731620685946992706031012911428, 2.141290706038744575749139226597328975732)
BI_ZERO_2 = complex(1.896775013895336346627217278298846596152, 3.627291764358919410440499143986727421351)
COT_BI_ZERO_1 = 0.4565213326592250947698641773450568424482
COT_BI_ZERO_2 = 0.5229176854568710782246649011598818632033
