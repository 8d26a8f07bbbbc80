from .models import Spectrum, StepSignal  # noqa: F401
from .services import eig_sym, gft, high_freq_fraction, igft, total_variation  # noqa: F401
