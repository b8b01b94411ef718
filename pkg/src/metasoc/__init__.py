"""Self-organized-criticality diagnostics for diachronic construction data.

The pipeline runs from dependency-parsed, year-stamped corpora to
constructions (:mod:`metasoc.constructions`), power-law and
Menzerath-Altmann fits (:mod:`metasoc.fitting`), temporal transformation
rules (:mod:`metasoc.rules`) and summary statistics (:mod:`metasoc.stats`).
:mod:`metasoc.soc` holds the sandpile and adoption-cascade simulators.
"""

__version__ = "0.1.0"

from .constructions import (Construction, MetaphorProfile, Signature, cluster, signature_of,
                            summarize)
from .corpus import Corpus, DepSentence, Instance, Token, extract_instances, parse_corpus
from .fitting import (FitQuality, LogisticFit, MALawFit, PointSet, PowerLawFit, fit_logistic,
                      fit_ma_law, fit_power_law, sample_curve)
from .rules import (ClassTimeline, TransformationRule, apply_rules_report, class_timeline,
                    mine_rules)
from .stats import (CorrelationMatrix, MetaphorRow, batch_fit_summary, correlation_matrix,
                    pearson, rank_frequency)
