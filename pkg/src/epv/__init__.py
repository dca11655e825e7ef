"""Energy per vertex of regular graphs: extremal incidence-graph families,
their spectra, the bounds they are measured against, and the eigenvalue
optimisation problem behind the upper bound."""

__version__ = "0.1.0"
