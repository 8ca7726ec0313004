"""Exact computational algebra for small finite rings.

Subpackages cover: finite rings as operation tables (finring), the lattice
of commutative subrings (commlattice), partial-ring structures and partial
ideals (partial), prime spectra and partial spectra (primespec), exact
Kochen-Specker ray colorings (ks), and the end-to-end obstruction report
(obstruction).  The `partspec` console script exposes the same machinery
on the command line.
"""

__version__ = "0.1.0"
