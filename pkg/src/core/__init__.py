"""
Core components of the heavy-tail framework

Base distributions, the monotone transform, the generated distribution,
quantile-regression fitting, maximum-likelihood baselines, goodness-of-fit
tests and tail diagnostics.
"""
