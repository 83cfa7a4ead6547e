"""Temporal topic extraction and lineage tracking for longitudinal corpora.

The pipeline: ingest a timestamped corpus, slice it into epochs, fit one
nonparametric topic model per epoch, connect topics of adjacent epochs in
similarity/divergence graphs, prune the graphs at a CDF operating point,
and classify topic dynamics (emergence, vanishing, evolution, speciation,
convergence, splitting, merging).
"""

__version__ = "0.1.0"
