"""Single-photon scattering off giant atoms with discrete or continuous coupling."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    DiscreteCoupling,
    DomainError,
    MarkovCharacterization,
    RegularArray,
    Regime,
    SpectrumTable,
    SystemParams,
    detuned_phase,
    expand_regular,
)
from .discrete import (  # noqa: E402
    classify_regime,
    markov_characterize,
    markov_characterize_regular,
    scatter_general,
    scatter_markov,
    scatter_regular,
)
from .distributions import (  # noqa: E402
    DoubleExponential,
    Exponential,
    RaisedCosine,
    Tabulated,
    Triangular,
    Uniform,
    distribution_value,
    load_tabulated,
    make_distribution,
)
from .continuum import (  # noqa: E402
    discretize,
    markov_characterize_closed,
    markov_characterize_quadrature,
    scatter_continuum,
    scatter_double_exp,
)
from .features import (  # noqa: E402
    double_exp_feature_report,
    feature_report,
    transmission_zeros,
)
from .oracle import amplitude_phase_continuum, convergence_study, solve_matching  # noqa: E402

__all__ = [name for name in dir() if not name.startswith("_")]
