"""
From couplings to atom speeds
=============================

With g/2π = 25 kHz and δ = 10 g the two collisions take 3π/(4λ) in total.
Dividing a cavity length by that time gives the velocity the atoms need.
"""

from cavity_qutrits import PhysParams, analysis

params = PhysParams.from_ratio(g_over_2pi_hz=25e3, delta_ratio=10.0)
report = analysis.physical_report(params, cavity_length=0.0275)
for key in ("lambda_rad_s", "rabi_period_s", "t1_s", "t2_s", "t_total_s", "velocity_m_s",
            "t_total_over_radiative_time", "t_total_over_photon_lifetime"):
    print(f"{key:30s} {report[key]:.6g}")

# %% Larger detuning buys fidelity but slows the exchange down.
print("\n delta/g   t_total (s)   v at 2.75 cm (m/s)")
for ratio in (5, 10, 20, 40):
    r = analysis.physical_report(PhysParams.from_ratio(25e3, ratio), 0.0275)
    print(f"{ratio:7d}   {r['t_total_s']:.3e}     {r['velocity_m_s']:8.2f}")
