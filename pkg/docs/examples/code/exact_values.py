"""
Exact values of the SU(2) loop observables for the four couplings used in
the reduced-SDE runs.

"""
from gaugecool.exact import su2_expectation

COUPLINGS = [1 + 0.2j, 1 + 2j, 5 + 1j, 5 + 10j]

for beta in COUPLINGS:
    print(f'beta = {beta.real:g}{beta.imag:+g}i')
    for k in (1, 2, 3):
        value = su2_expectation(k, beta)
        print(f'  <O_{k}> = {value.real:.4f}{value.imag:+.4f}i')
