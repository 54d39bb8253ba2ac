"""Print the single-user MH anchor BERs (Rayleigh, DPSK, no jammers) and their timing."""

import time

from vortexhop import SystemConfig, average_ber, db_to_linear

REFERENCE = {(4, 5): 5.4e-3, (4, 10): 1.3e-4, (2, 5): 4.0e-2, (2, 10): 6.0e-3}


def main():
    for (U, db), ref in REFERENCE.items():
        start = time.perf_counter()
        value = average_ber(SystemConfig(N=10, U=U, K=0, m=1, zeta=db_to_linear(db)), "MH")
        elapsed = time.perf_counter() - start
        print(f"U={U} SNR={db:>2} dB  BER={value:.4e}  reference={ref:.1e}  rel={abs(value - ref) / ref:.3f}  {elapsed * 1e3:.2f} ms")


if __name__ == "__main__":
    main()
