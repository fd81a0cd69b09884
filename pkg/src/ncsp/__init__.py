"""Sum-product decoding of network codes over the Boolean semiring."""

from .algebra import Alphabet, parse_alphabet
from .decode import (DecodeResult, FastDecodabilityReport,
                     analyze_fast_decodability, decode_bruteforce,
                     decode_gaussian, decode_sp, default_root, extract_support)
from .encoding import (EncodingMap, Linear, NonLinear, eval_map, is_linear,
                       map_to_text, parse_map, support_vars)
from .engine import (Message, MessageStore, MultiVertex, OpCounter,
                     SingleVertex, compute_message, compute_state, format_report,
                     report_rows, run)
from .errors import (AlphabetError, AmbiguousDecode, BudgetExceeded,
                     DecodeError, GraphError, InconsistentObservations,
                     NcspError, NotLinearCode, ParseError,
                     RunningIntersectionError, ScheduleError, Underdetermined,
                     UnsupportedOperation)
from .factorgraph import (ClusterGraph, GraphNode, KernelTable, build_factor_graph,
                          build_kernel, dump_graph, global_kernel_support)
from .fixtures import FIXTURE_IDS, fixture_files, make_fixture
from .netfile import (format_network, format_observation,
                      parse_inline_observation, parse_network, parse_observation)
from .network import (NetworkCode, Observation, SinkSpec, transmit,
                      verify_code)
from .transform import (Cluster, ExactnessReport, Stretch, apply_transcript,
                        auto_acyclic, check_exactness, cluster, find_cycles,
                        format_transcript, parse_transcript, stretch)

__version__ = "0.1.0"
