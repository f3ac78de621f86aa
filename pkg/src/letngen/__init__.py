"""letngen: community-aware surrogate temporal network generation.

Learns local interaction patterns (labeled egocentric temporal neighborhood
signatures) from a face-to-face contact network and generates surrogate
temporal networks that reproduce how interactions distribute within and
across communities. Includes label-free fallbacks via Louvain community
detection and a metrics suite for quantifying surrogate fidelity.
"""

__version__ = "0.1.0"

from .core import (LabelAssignment, Snapshot, SplitConfig, TemporalNetwork,
                   WeightedStaticGraph, aggregate, aggregate_split,
                   local_split_of, make_network)
from .signature import (Extension, MaskedKey, NodeEncoding, Signature,
                        build_encoding, extract_signature, mask_signature,
                        signature_census, unmask)
from .dictionary import (ExtensionTable, build_table, load_table, save_table,
                         table_stats, train_table)
from .community import Partition, cletn_labels, dletn_labels, louvain
from .generate import (GenConfig, RequestSet, generate_batch,
                       generate_surrogate, propose_layer, rescale_population,
                       seeds_from_network, validate_layer)
from .metrics import (ComparisonReport, MetricReport, MetricSeries,
                      clustering_coefficient, contact_matrix, evaluate,
                      label_assortativity, mean_duration_matrix, metric_series,
                      modularity, modularity_weighted, network_report, pca2,
                      series_distance, signature_feature_matrix)
from .io import (DataError, ParsedEvents, metadata_labels, parse_events,
                 parse_metadata, read_network, snapshotize, write_network)
from .rng import child_rng, child_seed
