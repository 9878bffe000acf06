"""Feature selection on class-imbalanced tabular cohorts.

Balanced under-sampling ensembles rank features by mutual information,
rank-order prefixes are chosen by held-out AUROC, and the picks are
checked with independent classifiers and classical significance tests.
"""

__version__ = "0.1.0"
