"""Streaming-approximation toolkit for Boolean Max-2CSP and Max-kSAT.

Core pieces:

- :mod:`streamcsp.formula`    -- clause/formula data model, parsing, classification
- :mod:`streamcsp.l1sketch`   -- mergeable (1 +/- delta) l1-norm sketch
- :mod:`streamcsp.bias`       -- exact and sketched bias-vector accumulation
- :mod:`streamcsp.estimators` -- single-pass value estimators with certified bounds
- :mod:`streamcsp.rounding`   -- greedy and biased-coin assignment constructors
- :mod:`streamcsp.oracle`     -- exhaustive exact optimum for small n
- :mod:`streamcsp.gapgen`     -- hard YES/NO instance generators
- :mod:`streamcsp.verify`     -- exact-arithmetic inequality suite
- :mod:`streamcsp.report`     -- tabular + figure reporting
"""

__version__ = "0.1.0"
