"""termcalc: ring and Boolean term calculator with certified rewriting,
sparse polynomial expansion, DNF normalization, and exact independence
checking on finite probability spaces."""

__version__ = "0.1.0"
