"""Dispersion and attenuation of pressure waves in media with completely
monotone relaxation kernels."""
from .kernels import (Medium, cole_cole_kernel, constant_q_kernel, measure_kernel,
                      newtonian_kernel, normalize_static, prony_kernel, quasilinear_measure)
from .measures import SpectralMeasure, integrability_report
from .dispersion import (attenuation, beta, curve, excess_dispersion, extract_measure,
                         kappa, phase_speed, prony_saturation, static_speed,
                         wavefront_speed)
from .mlf import ml_neg_power

__version__ = "0.1.0"
