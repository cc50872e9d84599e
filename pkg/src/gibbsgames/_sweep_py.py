"""Pure-Python twin of the compiled sweep kernel.

Kept step-for-step identical to ``_sweep_cy.run_sweeps`` (same uniforms, same
cumulative rows, same comparisons), so either backend produces bit-identical
traces. Arrays are unpacked to lists up front; the IEEE comparisons are
unchanged by the round trip.
"""


def run_sweeps(state, out, uniforms, nbr_flat, nbr_off, nbr_sizes, cdf_flat, cdf_off, n_actions):
    n = state.shape[0]
    rounds = out.shape[0]
    st = state.tolist()
    u_list = uniforms.tolist()
    nbr_flat = nbr_flat.tolist()
    nbr_off = nbr_off.tolist()
    nbr_sizes = nbr_sizes.tolist()
    cdf = cdf_flat.tolist()
    cdf_off = cdf_off.tolist()
    n_actions = n_actions.tolist()

    t = 0
    for r in range(rounds):
        for i in range(n):
            idx = 0
            for j in range(nbr_off[i], nbr_off[i + 1]):
                idx = idx * nbr_sizes[j] + st[nbr_flat[j]]
            na = n_actions[i]
            base = cdf_off[i] + idx * na
            u = u_list[t]
            a = 0
            while a < na - 1 and u >= cdf[base + a]:
                a += 1
            st[i] = a
            t += 1
        out[r, :] = st
    state[:] = st
