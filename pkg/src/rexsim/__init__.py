"""rexsim: cavity QED of a single rare-earth ion in a nanophotonic resonator.

Library layout:

- constants, quantities: CODATA values, frequency conventions, thermal factors
- spectroscopy: oscillator strength, radiative lifetime, dipole moment, Zeeman
- cavity: Purcell factors, coupling rate, cooperativity, detection budget
- spinbath: superhyperfine splittings, echo envelope modulation, flip-flop model
- dynamics: Bloch evolution, Rabi/Ramsey/echo simulators, fit routines
- photonstats: pulsed photon-counting Monte Carlo, g2 estimation, fine structure
- config, csvio, cli: INI configuration, CSV emission, command-line front end
"""

__version__ = "0.1.0"
