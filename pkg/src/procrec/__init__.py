"""Recommend game development processes from postmortem-derived elements.

Projects are described by binary context vectors; PCA over the context matrix
finds similar past projects, whose process elements are merged into a
recommended process and scored against extracted processes.
"""

from .context import ContextMatrix, ContextVector, append_context, lint_context, load_contexts
from .corpus import (
    AbstractionDictionary,
    ElementRecord,
    ElementStore,
    elements_of,
    ingest_elements,
    normalize_keys,
)
from .evaluation import (
    ConfusionMatrix,
    CoverageInputs,
    MetricsReport,
    compare_elements,
    correctness_metrics,
    coverage_metrics,
    evaluate_against_extracted,
    likert_tally,
)
from .kernels import BACKEND
from .pca import PcaModel, SimilarityRanking, export_biplot, find_similar, fit_pca, project
from .recommend import MergedElement, RecommendedProcess, element_set, recommend
from .render import render_dot

__version__ = "0.1.0"
