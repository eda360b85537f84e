"""
Build prior models from parsed definition files.

Mean and covariance entries are either literals or generator maps
(`{ kind: "...", ... }`). Generators are registered by kind, so new
experiment families only need one decorated function.
"""

from pathlib import Path
from typing import Any, Callable, Dict, List, Union

import numpy as np

from src.determinism import DomainTag, derive_stream, gauss
from src.priors.gaussian import GaussianPrior
from src.priors.gmm import GmmPrior
from src.priors.interface import PriorModel
from src.priors.parser import ParsedBlock, PriorFileParser, parse_prior_file
from src.utils.errors import PriorConfigError
from src.utils.logger import get_logger

logger = get_logger(__name__)

CovarianceGenerator = Callable[[Dict[str, Any], int], np.ndarray]

_COVARIANCE_GENERATORS: Dict[str, CovarianceGenerator] = {}


def register_covariance(kind: str):
    """Decorator registering a covariance generator under `kind`."""
    def decorator(func: CovarianceGenerator) -> CovarianceGenerator:
        _COVARIANCE_GENERATORS[kind] = func
        return func
    return decorator


def covariance_kinds() -> List[str]:
    return sorted(_COVARIANCE_GENERATORS)


def _number(spec: Dict[str, Any], key: str, default=None) -> float:
    value = spec.get(key, default)
    if value is None:
        raise PriorConfigError(f"generator {spec.get('kind')!r} requires '{key}'")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise PriorConfigError(f"'{key}' must be a number, got {value!r}")
    return float(value)


def _vector(values: Any, dim: int, what: str) -> np.ndarray:
    if not isinstance(values, list) or len(values) != dim:
        raise PriorConfigError(f"{what} must be a list of {dim} numbers")
    try:
        return np.array(values, dtype=np.float64)
    except (TypeError, ValueError):
        raise PriorConfigError(f"{what} must contain only numbers") from None


@register_covariance('identity')
def _identity(spec: Dict[str, Any], dim: int) -> np.ndarray:
    return _number(spec, 'scale', 1.0) * np.eye(dim)


@register_covariance('diagonal')
def _diagonal(spec: Dict[str, Any], dim: int) -> np.ndarray:
    return np.diag(_vector(spec.get('values'), dim, 'diagonal values'))


@register_covariance('ladder')
def _ladder(spec: Dict[str, Any], dim: int) -> np.ndarray:
    """scale * base**i on the diagonal (geometric eigenvalue ladder)."""
    base = _number(spec, 'base')
    scale = _number(spec, 'scale', 1.0)
    return np.diag(scale * base ** np.arange(dim, dtype=np.float64))


@register_covariance('block')
def _block(spec: Dict[str, Any], dim: int) -> np.ndarray:
    """`value` on coordinates [start, stop), `floor` elsewhere."""
    start = int(_number(spec, 'start'))
    stop = int(_number(spec, 'stop'))
    if not 0 <= start < stop <= dim:
        raise PriorConfigError(f"block range [{start}, {stop}) outside dimension {dim}")
    diag = np.full(dim, _number(spec, 'floor', 0.0))
    diag[start:stop] = _number(spec, 'value')
    return np.diag(diag)


@register_covariance('literal')
def _literal(spec: Dict[str, Any], dim: int) -> np.ndarray:
    rows = spec.get('values')
    if not isinstance(rows, list) or len(rows) != dim:
        raise PriorConfigError(f"literal covariance must have {dim} rows")
    return np.vstack([_vector(row, dim, 'covariance row') for row in rows])


@register_covariance('random-psd')
def _random_psd(spec: Dict[str, Any], dim: int) -> np.ndarray:
    """scale * B Bᵀ / rank with B (dim x rank) standard normal from the SOURCE stream."""
    seed = int(_number(spec, 'seed', 0))
    rank = int(_number(spec, 'rank', dim))
    if rank < 1:
        raise PriorConfigError("random-psd rank must be at least 1")
    stream = derive_stream(seed, DomainTag.SOURCE, 0, 0)
    b = gauss(stream, dim * rank).reshape(dim, rank)
    return _number(spec, 'scale', 1.0) * (b @ b.T) / rank


def build_mean(spec: Any, dim: int) -> np.ndarray:
    if spec is None:
        return np.zeros(dim)
    if isinstance(spec, list):
        return _vector(spec, dim, 'mean')
    if not isinstance(spec, dict):
        raise PriorConfigError(f"unsupported mean specification {spec!r}")
    kind = spec.get('kind', 'literal')
    if kind == 'zeros':
        return np.zeros(dim)
    if kind == 'constant':
        return np.full(dim, _number(spec, 'value'))
    if kind == 'literal':
        return _vector(spec.get('values'), dim, 'mean')
    raise PriorConfigError(f"unknown mean kind {kind!r}")


def build_covariance(spec: Any, dim: int) -> np.ndarray:
    if not isinstance(spec, dict):
        raise PriorConfigError("covariance must be a map with a 'kind'")
    kind = spec.get('kind')
    generator = _COVARIANCE_GENERATORS.get(kind)
    if generator is None:
        raise PriorConfigError(f"unknown covariance kind {kind!r}; known: {', '.join(covariance_kinds())}")
    return generator(spec, dim)


def _dim(props: Dict[str, Any]) -> int:
    dim = props.get('dim')
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise PriorConfigError(f"'dim' must be a positive integer, got {dim!r}")
    return dim


def build_prior(block: ParsedBlock) -> PriorModel:
    """Turn one parsed block into a prior model."""
    props = block.properties
    dim = _dim(props)
    if block.block_type == 'gaussian':
        return GaussianPrior(build_mean(props.get('mean'), dim),
                             build_covariance(props.get('covariance'), dim),
                             name=block.name)
    if block.block_type == 'gmm':
        comps = props.get('components')
        if not isinstance(comps, list) or not comps:
            raise PriorConfigError("gmm block needs a non-empty 'components' list")
        weights, gaussians = [], []
        for i, comp in enumerate(comps):
            if not isinstance(comp, dict):
                raise PriorConfigError(f"component {i} must be a map")
            weights.append(_number(comp, 'weight'))
            gaussians.append(GaussianPrior(build_mean(comp.get('mean'), dim),
                                           build_covariance(comp.get('covariance'), dim),
                                           name=f"{block.name}[{i}]"))
        return GmmPrior(weights, gaussians, name=block.name)
    raise PriorConfigError(f"line {block.line}: unknown prior type {block.block_type!r}")


def _single(blocks: List[ParsedBlock], origin: str) -> ParsedBlock:
    if len(blocks) != 1:
        raise PriorConfigError(f"{origin}: expected exactly one prior block, found {len(blocks)}")
    return blocks[0]


def parse_prior_text(text: str) -> PriorModel:
    """Build the prior defined by `text`."""
    return build_prior(_single(PriorFileParser(text).parse(), '<text>'))


def load_prior(path: Union[str, Path]) -> PriorModel:
    """Load the prior defined in a file."""
    path = Path(path)
    if not path.is_file():
        raise PriorConfigError(f"prior file not found: {path}")
    prior = build_prior(_single(parse_prior_file(path), str(path)))
    logger.debug(f"Loaded {prior!r} from {path} (digest {prior.digest():016x})")
    return prior
