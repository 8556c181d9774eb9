"""Rows of exact partition values for the batch artifacts."""

from typing import Dict, Iterable, List, Optional

from src.config import EnumerationConfig
from src.models.params import DisorderVector, ModelParams
from src.models.results import METHOD_ENUMERATION
from src.partition.enumeration import adjusted_partition, partition_enumerate, partition_no_double_return


PARTITION_COLUMNS = ("n", "eps", "beta", "seed", "log_z", "log_z_adjusted", "log_z_no_double_return",
                     "stderr", "method")


def partition_rows(sizes: Iterable[int], eps_values: Iterable[float], beta: float = 0.0,
                   disorder: Optional[DisorderVector] = None,
                   config: Optional[EnumerationConfig] = None) -> List[Dict]:
    """Exact log Z, log of the adjusted partition and log Ž for each (n, eps).

    The no-double-return column refers to the segment [0, n) with weights
    b_0..b_{n-1}. Enumerated values carry a zero standard error.
    """
    rows = []
    eps_values = list(eps_values)
    for n in sizes:
        for eps in eps_values:
            params = ModelParams(beta=beta, eps=eps, n=n)
            value = partition_enumerate(params, disorder, config)
            adjusted = adjusted_partition(params, disorder, config)
            hat = partition_no_double_return(eps, n, disorder, beta, config=config)
            rows.append({
                "n": n,
                "eps": eps,
                "beta": beta,
                "seed": "" if disorder is None else disorder.seed,
                "log_z": value.log_value,
                "log_z_adjusted": adjusted.log_value,
                "log_z_no_double_return": hat.log_value,
                "stderr": 0.0,
                "method": METHOD_ENUMERATION,
            })
    return rows
