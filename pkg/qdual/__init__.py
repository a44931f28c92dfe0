from .config import get_config
from .errors import QDualError
from .hyperq import PhiSeries, SeriesValue, WSeries, eval_phi, eval_w
from .qcore import PrecisionContext, QParam, qbinom, qpoch
from .registry import get_identity, gram, list_identities, verify


__version__ = "0.1.0"


def create_context(config_name: str | None = None) -> PrecisionContext:
	"""Precision context for ``config_name`` ("standard", "extended" or $QDUAL_PRECISION)."""
	return PrecisionContext.from_config(get_config(config_name))


__all__ = [
	"PhiSeries",
	"PrecisionContext",
	"QDualError",
	"QParam",
	"SeriesValue",
	"WSeries",
	"create_context",
	"eval_phi",
	"eval_w",
	"get_identity",
	"gram",
	"list_identities",
	"qbinom",
	"qpoch",
	"verify",
]
