"""namesieve: separate the publication records of same-named authors.

Pipeline: parse an export file, score every record pair by coincidence
probability, clamp and close the distances, cluster at distance zero, then
review the clusters interactively (terminal dialog, HTTP service or web UI).
"""

from .clusters import Cluster, build_clusters, cluster_distance, pick_representative
from .coincidence import FIELDS, FieldModel, field_coincidence, log_p_exact, log_p_tail
from .distance import DistanceMatrix, build_matrix, close_distances, pair_distance
from .ingest import ParseError, parse_export, parse_export_file, render_export, tokenize_field
from .records import Corpus, PublicationRecord
from .session import (
    SelectionSession,
    auto_reject_beyond_cutoff,
    decide,
    export_selection,
    load_session,
    next_cluster,
    replay,
    save_session,
)
from .synth import GeneratorParams, evaluate, generate

__version__ = "0.1.0"
