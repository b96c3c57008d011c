"""Pure-Python twins of the compiled kernels in ``_kernels.pyx``.

Same signatures, same arithmetic order, so both backends return identical
floats for identical inputs.
"""

from math import exp

EXP_CUTOFF = 746.0
INV_2_53 = 1.0 / 9007199254740992.0
_CHUNK = 4096


def anneal_run(quad, offset, z, best_z, bit_generator, iterations, t0, gamma,
               resync, energy_out, best_out):
    n = z.shape[0]
    per_iter = 2 * n
    rows = quad.tolist()
    zl = z.tolist()
    record = energy_out.shape[0] == iterations
    # buffered reads of the raw stream give the same draws as one-at-a-time
    raw = []
    pos = 0

    def resync_state():
        fl = []
        e = offset
        for i in range(n):
            acc = 0.0
            row = rows[i]
            for j in range(n):
                if zl[j]:
                    acc += row[j]
            fl.append(acc)
            if zl[i]:
                e += acc
        return fl, e

    fl, energy = resync_state()
    best_energy = energy
    best_snapshot = list(zl)
    accepted = 0
    for t in range(iterations):
        T = t0 * gamma ** float(t)
        for _ in range(per_iter):
            if pos == len(raw):
                raw = bit_generator.random_raw(_CHUNK).tolist()
                pos = 0
            i = int((raw[pos] >> 11) * INV_2_53 * n)
            pos += 1
            sign = 1.0 - 2.0 * zl[i]
            row = rows[i]
            delta = row[i] + 2.0 * sign * fl[i]
            accept = delta <= 0.0
            if not accept and T > 0.0 and delta < EXP_CUTOFF * T:
                if pos == len(raw):
                    raw = bit_generator.random_raw(_CHUNK).tolist()
                    pos = 0
                u = (raw[pos] >> 11) * INV_2_53
                pos += 1
                accept = u < exp(-delta / T)
            if accept:
                zl[i] = 1 - zl[i]
                for j in range(n):
                    fl[j] += sign * row[j]
                energy += delta
                accepted += 1
                if energy < best_energy:
                    best_energy = energy
                    best_snapshot = list(zl)
        if record:
            energy_out[t] = energy
            best_out[t] = best_energy
        if (t + 1) % resync == 0:
            fl, energy = resync_state()

    z[:] = zl
    best_z[:] = best_snapshot
    return energy, best_energy, accepted


def metropolis_block(gram, moment, w, gw, cost, temperature,
                     picks, steps, uniforms, interval, out):
    D = w.shape[0]
    G = gram.tolist()
    m = moment.tolist()
    wl = w.tolist()
    gl = gw.tolist()
    picks = picks.tolist()
    steps = steps.tolist()
    uniforms = uniforms.tolist()
    accepted = 0

    k = 0
    for r in range(out.shape[0]):
        for _ in range(interval):
            d = picks[k]
            step = steps[k]
            delta = step * step * G[d][d] + 2.0 * step * (gl[d] - m[d])
            if delta <= 0.0 or uniforms[k] < exp(-delta / temperature):
                wl[d] += step
                for j in range(D):
                    gl[j] += step * G[j][d]
                cost += delta
                accepted += 1
            k += 1
        out[r, :] = wl

    w[:] = wl
    gw[:] = gl
    return cost, accepted
