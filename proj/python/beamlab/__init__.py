"""Robust adaptive beamforming via preprocessing-based spatial sampling."""

from ._core import (
    ArrayGeometry,
    BeamlabError,
    ScenarioSpec,
    ScenarioTruth,
    approx_beampattern,
    beampattern,
    closed_form_shrinkage,
    coarse_doas_dft,
    crb_doa,
    fine_doa,
    generate_snapshots,
    mvdr_weight,
    optimal_sinr_db,
    output_sinr_db,
    pearson_correlation,
    power_method,
    ppbss_beamformer,
    preset_names,
    realize_scenario,
    run_preset,
    sample_covariance,
    steering_vector,
    theoretical_ipnc,
    zeta_estimate,
)

__version__ = "0.3.0"
