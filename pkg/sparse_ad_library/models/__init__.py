"""
Residual models and the registry that looks them up by name.
"""

__all__ = ['MODELS', 'ALGEBRAIC_MODELS', 'DAE_MODELS', 'get_model',
           'ResidualModel', 'DaeModel', 'LorenzModel', 'LorenzParams',
           'MicrogridModel', 'MicrogridParams', 'DecayModel']

from sparse_ad_library.models.base import DaeModel, ResidualModel
from sparse_ad_library.models.config import load_params
from sparse_ad_library.models.decay import DecayModel
from sparse_ad_library.models.lorenz import REFERENCE_PARAMS, LorenzModel, LorenzParams
from sparse_ad_library.models.microgrid import MicrogridModel, MicrogridParams

ALGEBRAIC_MODELS = ('lorenz',)
DAE_MODELS = ('microgrid', 'decay')
MODELS = ALGEBRAIC_MODELS + DAE_MODELS


def get_model(name, N=1, config=None, swap_roles=False, params=None):
    """
    Build a registered model.

    ### Parameters:

        **name**: str
            One of `MODELS`.

        **N**: int
            Load count (microgrid only).

        **config**: str, optional
            Path of a key=value file overriding the model's parameter fields.

        **swap_roles**: bool
            Lorenz only: make (sigma, rho, beta) the unknowns.

        **params**: dataclass instance, optional
            Starting parameters before `config` is applied; model default otherwise.

    ### Raises:

        **KeyError** for unknown names, **ConfigError** for bad config files.
    """
    if name == 'lorenz':
        return LorenzModel(load_params(params or REFERENCE_PARAMS, config), swap_roles=swap_roles)
    if name == 'microgrid':
        return MicrogridModel(N, load_params(params or MicrogridParams(), config))
    if name == 'decay':
        return DecayModel()
    raise KeyError(f"Unknown model '{name}' (available: {', '.join(MODELS)})")
