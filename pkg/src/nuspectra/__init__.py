"""Nikiforov-Uvarov spectra of the q-deformed Woods-Saxon + Rosen-Morse + double-well family."""

__version__ = "0.1.0"
