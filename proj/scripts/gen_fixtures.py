#!/usr/bin/env python3
"""Generate the vendored FTEN fixtures under tests/fixtures/.

Run once, offline, with PySCF available:

    python3 scripts/gen_fixtures.py tests/fixtures

The build and test suite never import PySCF; they only read the files this
script writes. See FIXTURES.md for the resulting checksums.
"""
import hashlib
import json
import os
import sys

import numpy as np
from pyscf import ao2mo, cc, gto, scf


def write_ften(path, arr, convention):
    arr = np.asarray(arr, dtype=np.complex128)
    flat = arr.reshape(-1)
    data = np.empty(2 * flat.size)
    data[0::2] = flat.real
    data[1::2] = flat.imag
    doc = {
        "version": 1,
        "order": arr.ndim,
        "dims": list(arr.shape),
        "layout": "row-major",
        "convention": convention,
        "dtype": "complex128",
        "data": [float(x) for x in data],
    }
    with open(path, "w") as f:
        json.dump(doc, f, separators=(",", ":"))


def ab_generator(t2ab, nocca, noccb, nmo):
    """Charge-charge tensor of T2(ab) - T2(ab)^dagger over interleaved spin-orbitals."""
    n = 2 * nmo
    k = np.zeros((n, n, n, n))
    nvira = nmo - nocca
    nvirb = nmo - noccb
    for i in range(nocca):
        for j in range(noccb):
            for a in range(nvira):
                for b in range(nvirb):
                    t = t2ab[i, j, a, b]
                    if t == 0.0:
                        continue
                    I, J = 2 * i, 2 * j + 1
                    A, B = 2 * (a + nocca), 2 * (b + noccb) + 1
                    k[A, I, B, J] += 0.5 * t
                    k[B, J, A, I] += 0.5 * t
                    k[J, B, I, A] -= 0.5 * t
                    k[I, A, J, B] -= 0.5 * t
    return k


def antisym_oovv(eri_mo, nocca, noccb, nmo):
    """<ij||ab> over interleaved spin-orbitals, zero outside occ-occ-virt-virt."""
    n = 2 * nmo
    occ = [2 * p for p in range(nocca)] + [2 * p + 1 for p in range(noccb)]
    vir = [2 * p for p in range(nocca, nmo)] + [2 * p + 1 for p in range(noccb, nmo)]
    v = np.zeros((n, n, n, n))

    def phys(p, q, r, s):
        # <pq|rs> = (pr|qs) with spin selection
        if p % 2 != r % 2 or q % 2 != s % 2:
            return 0.0
        return eri_mo[p // 2, r // 2, q // 2, s // 2]

    for i in occ:
        for j in occ:
            for a in vir:
                for b in vir:
                    v[i, j, a, b] = phys(i, j, a, b) - phys(i, j, b, a)
    return v


def cc_fixture(name, mol, outdir, open_shell=False):
    if open_shell:
        mf = scf.ROHF(mol)
        mf.conv_tol = 1e-12
        mf.kernel()
        mycc = cc.UCCSD(mf)
        mycc.conv_tol = 1e-10
        mycc.max_cycle = 300
        mycc.kernel()
        _, t2ab, _ = mycc.t2
        nocca, noccb = mol.nelec
    else:
        mf = scf.RHF(mol)
        mf.conv_tol = 1e-12
        mf.kernel()
        mycc = cc.RCCSD(mf)
        mycc.conv_tol = 1e-10
        mycc.kernel()
        t2ab = mycc.t2
        nocca = noccb = mol.nelectron // 2
    assert mycc.converged, name
    nmo = mf.mo_coeff.shape[1]
    eri_mo = ao2mo.restore(1, ao2mo.kernel(mol, mf.mo_coeff), nmo)
    ovov = eri_mo[:nocca, nocca:, :noccb, noccb:]
    e_ab = float(np.einsum("ijab,iajb->", t2ab, ovov))

    k = ab_generator(t2ab, nocca, noccb, nmo)
    v = antisym_oovv(eri_mo, nocca, noccb, nmo)
    write_ften(os.path.join(outdir, f"{name}_tau2ab.ften"), k, "charge-charge")
    write_ften(os.path.join(outdir, f"{name}_v.ften"), v, "pqrs-ladder")
    return {
        "modes": 2 * nmo,
        "nocc_alpha": int(nocca),
        "nocc_beta": int(noccb),
        "e_hf": float(mf.e_tot),
        "e_ccsd_corr": float(mycc.e_corr),
        "e_doubles_ab": e_ab,
        "generator": f"{name}_tau2ab.ften",
        "energy_integrals": f"{name}_v.ften",
    }


NAPHTHALENE = """
C   0.0000   0.7083   0.0000
C   0.0000  -0.7083   0.0000
C   1.2412   1.3966   0.0000
C  -1.2412   1.3966   0.0000
C   1.2412  -1.3966   0.0000
C  -1.2412  -1.3966   0.0000
C   2.4168   0.6979   0.0000
C  -2.4168   0.6979   0.0000
C   2.4168  -0.6979   0.0000
C  -2.4168  -0.6979   0.0000
H   1.2390   2.4828   0.0000
H  -1.2390   2.4828   0.0000
H   1.2390  -2.4828   0.0000
H  -1.2390  -2.4828   0.0000
H   3.3586   1.2411   0.0000
H  -3.3586   1.2411   0.0000
H   3.3586  -1.2411   0.0000
H  -3.3586  -1.2411   0.0000
"""


def pi_eri_fixture(outdir):
    mol = gto.M(atom=NAPHTHALENE, basis="cc-pvdz", verbose=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-10
    mf.kernel()
    # pi orbitals are odd under z -> -z; measure their weight on odd AOs
    labels = mol.ao_labels(fmt=False)
    odd = np.array([lab[3] in ("z", "xz", "yz") for lab in labels])
    s = mol.intor("int1e_ovlp")
    c = mf.mo_coeff
    weight = np.einsum("mi,mn,ni->i", c[odd], s[np.ix_(odd, odd)], c[odd])
    nocc = mol.nelectron // 2
    pi = [i for i in range(c.shape[1]) if weight[i] > 0.5]
    pi_occ = [i for i in pi if i < nocc]
    pi_vir = [i for i in pi if i >= nocc][:5]
    assert len(pi_occ) == 5, pi_occ
    sel = pi_occ + pi_vir
    eri = ao2mo.restore(1, ao2mo.kernel(mol, c[:, sel]), len(sel))
    write_ften(os.path.join(outdir, "naphthalene_pi_eri.ften"), eri, "hermitian-chemist")
    return {
        "orbitals": len(sel),
        "mo_indices": sel,
        "e_hf": float(mf.e_tot),
        "eri": "naphthalene_pi_eri.ften",
    }


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else "tests/fixtures"
    os.makedirs(outdir, exist_ok=True)
    meta = {}
    meta["hf_sto3g"] = cc_fixture(
        "hf_sto3g", gto.M(atom="H 0 0 0; F 0 0 1.6", basis="sto-3g", verbose=0), outdir)
    meta["h4_631g"] = cc_fixture(
        "h4_631g",
        gto.M(atom="H 0 0 0; H 0 0 1.6; H 0 0 3.2; H 0 0 4.8", basis="6-31g", verbose=0),
        outdir)
    meta["o2_sto3g"] = cc_fixture(
        "o2_sto3g", gto.M(atom="O 0 0 0; O 0 0 1.2075", basis="sto-3g", spin=2, verbose=0),
        outdir, open_shell=True)
    meta["naphthalene_pi"] = pi_eri_fixture(outdir)
    for entry in meta.values():
        for key in ("generator", "energy_integrals", "eri"):
            if key in entry:
                with open(os.path.join(outdir, entry[key]), "rb") as f:
                    entry.setdefault("sha256", {})[entry[key]] = hashlib.sha256(f.read()).hexdigest()
    with open(os.path.join(outdir, "fixtures.json"), "w") as f:
        json.dump(meta, f, indent=2)
    print(json.dumps(meta, indent=2))


if __name__ == "__main__":
    main()
