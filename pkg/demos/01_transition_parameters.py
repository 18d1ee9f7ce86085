"""Derive every transition parameter from the measured material inputs.

The chain starts from an integrated absorption coefficient measured on a
reference crystal and ends with the oscillator strength, radiative
lifetime, branching ratio and transition dipole moment of the probed
optical transition. Run:

    python demos/01_transition_parameters.py
"""

from rexsim.quantities import ordinary_from_angular
from rexsim.spectroscopy import (
    LocalFieldModel,
    MaterialSpec,
    derive_transition,
    local_field_correction,
    zeeman_splitting,
)

material = MaterialSpec(
    absorption_area=102e9 * 100,  # 102 GHz/cm integrated absorption, in Hz/m
    ion_density=1.24e23,          # dopants per m^3 in the reference sample
    refractive_index=2.1785,      # host index for c-axis polarized light
    wavelength=880e-9,
    t1_fluorescence=90e-6,        # upper-level lifetime far from any cavity
    g_ground=2.36,
)

print("Inputs: 102 GHz/cm absorption area, N = 1.24e23 m^-3, n = 2.1785,")
print("        880 nm transition, bulk T1 = 90 us\n")

for model in (LocalFieldModel.REAL, LocalFieldModel.VIRTUAL):
    chi = local_field_correction(material.refractive_index, model)
    print(f"{model.value}-cavity local field correction: chi_L = {chi:.4f}")

print("\nThe real-cavity model is the appropriate one for a substitutional")
print("dopant; the full chain with it gives:\n")

tr = derive_transition(material, LocalFieldModel.REAL)
print(f"  oscillator strength f   = {tr.oscillator_strength:.3g}")
print(f"  radiative lifetime      = {tr.radiative_lifetime * 1e6:.1f} us")
print(f"  branching ratio beta    = {tr.branching_ratio:.3f}")
print(f"  dipole moment mu        = {tr.dipole_moment:.3g} C m")
print(f"  transition frequency    = {ordinary_from_angular(tr.angular_frequency) / 1e12:.3f} THz")

print("\nWith the 390 mT field applied, the ground Kramers doublet splits by")
split = zeeman_splitting(2.36, 0.39)
print(f"  g_perp mu_B B / h       = {split / 1e9:.2f} GHz")
print("\nOnly about e^(-h*split/kT) of the population sits in the upper Zeeman")
from rexsim.quantities import boltzmann_population_ratio

ratio = boltzmann_population_ratio(split, 0.5)
print(f"  level at 0.5 K: ratio   = {ratio:.3f} (this is how the sample")
print("  temperature is read off the two Zeeman line intensities)")
