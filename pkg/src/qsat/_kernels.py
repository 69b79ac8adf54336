"""Compiled inner loops for the solvers and the clause-flow integrator.

Everything here is numba-jitted and operates on flat arrays; the public
wrappers live in solvers.py and uc_ode.py. Randomness uses an inline
splitmix64 stream so results are bit-reproducible for a given seed,
independent of numpy's global state.
"""

import numpy as np
from numba import njit

STATUS_UNSAT = 0
STATUS_SAT = 1
STATUS_GAVEUP = 2

_SM_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_SM_M1 = np.uint64(0xBF58476D1CE4E5B9)
_SM_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / float(1 << 53)


@njit(cache=True, inline="always")
def _mix(z):
    z = (z ^ (z >> _S30)) * _SM_M1
    z = (z ^ (z >> _S27)) * _SM_M2
    return z ^ (z >> _S31)


@njit(cache=True, inline="always")
def _rand_u01(state):
    state = state + _SM_GAMMA
    z = _mix(state)
    return float(z >> _S11) * _INV53, state


@njit(cache=True, inline="always")
def _rand_below(state, bound):
    u, state = _rand_u01(state)
    i = int(u * bound)
    if i >= bound:
        i = bound - 1
    return i, state


@njit(cache=True, inline="always")
def _assign(v, val, value, pool, pos, psize, nsat, nun, occ_start, occ_list, units, nunits, trail, tlen):
    """Set variable v (1-based) to val, update clause counters, queue new
    units. Returns (conflict, psize, nunits, tlen)."""
    value[v - 1] = val
    i = pos[v - 1]
    last = pool[psize - 1]
    pool[i] = last
    pos[last - 1] = i
    psize -= 1
    trail[tlen] = v
    tlen += 1
    sat_code = 2 * (v - 1) + val
    fal_code = 2 * (v - 1) + (1 - val)
    for t in range(occ_start[sat_code], occ_start[sat_code + 1]):
        nsat[occ_list[t]] += 1
    conflict = False
    for t in range(occ_start[fal_code], occ_start[fal_code + 1]):
        c = occ_list[t]
        nun[c] -= 1
        if nsat[c] == 0:
            if nun[c] == 1:
                units[nunits] = c
                nunits += 1
            elif nun[c] == 0:
                conflict = True
    return conflict, psize, nunits, tlen


@njit(cache=True, inline="always")
def _unassign_to(mark, value, pool, pos, psize, nsat, nun, occ_start, occ_list, trail, tlen):
    """Undo trail assignments down to length ``mark`` (reverse order)."""
    while tlen > mark:
        tlen -= 1
        v = trail[tlen]
        val = value[v - 1]
        sat_code = 2 * (v - 1) + val
        fal_code = 2 * (v - 1) + (1 - val)
        for t in range(occ_start[sat_code], occ_start[sat_code + 1]):
            nsat[occ_list[t]] -= 1
        for t in range(occ_start[fal_code], occ_start[fal_code + 1]):
            nun[occ_list[t]] += 1
        value[v - 1] = -1
        pool[psize] = v
        pos[v - 1] = psize
        psize += 1
    return psize, tlen


@njit(cache=True)
def uc_run_kernel(n, k, lits, occ_start, occ_list, seed):
    """Unit Clause heuristic: free step (uniform literal on an unset
    variable) then exhaustive unit propagation; no backtracking.

    Returns (status, rounds, value): SAT when every variable got set
    without creating an empty clause, GAVEUP at the first contradiction.
    Rounds counts free steps only.
    """
    m = lits.shape[0] // k if k > 0 else 0
    value = np.full(n, -1, np.int8)
    nsat = np.zeros(m, np.int32)
    nun = np.full(m, k, np.int32)
    units = np.empty(max(m, 1), np.int32)
    nunits = 0
    pool = np.arange(1, n + 1).astype(np.int32)
    pos = np.arange(n).astype(np.int32)
    psize = n
    trail = np.empty(n, np.int32)
    tlen = 0
    state = _mix(np.uint64(seed))
    rounds = 0

    for c in range(m):  # parsed formulas may open with units or empties
        if nun[c] == 0:
            return STATUS_GAVEUP, rounds, value
        if nun[c] == 1:
            units[nunits] = c
            nunits += 1

    while True:
        while nunits > 0:
            nunits -= 1
            c = units[nunits]
            if nsat[c] > 0:
                continue
            lit = 0
            for t in range(c * k, c * k + k):
                if value[abs(lits[t]) - 1] == -1:
                    lit = lits[t]
                    break
            if lit == 0:
                continue
            v = abs(lit)
            val = 1 if lit > 0 else 0
            conflict, psize, nunits, tlen = _assign(
                v, val, value, pool, pos, psize, nsat, nun,
                occ_start, occ_list, units, nunits, trail, tlen)
            if conflict:
                return STATUS_GAVEUP, rounds, value
        if psize == 0:
            return STATUS_SAT, rounds, value
        idx, state = _rand_below(state, psize)
        v = pool[idx]
        u, state = _rand_u01(state)
        val = 1 if u < 0.5 else 0
        rounds += 1
        conflict, psize, nunits, tlen = _assign(
            v, val, value, pool, pos, psize, nsat, nun,
            occ_start, occ_list, units, nunits, trail, tlen)
        if conflict:
            return STATUS_GAVEUP, rounds, value


@njit(cache=True)
def dpll_kernel(n, k, lits, occ_start, occ_list, seed, node_limit):
    """Backtracking search with unit propagation at every node.

    Splitting takes a uniformly random unset variable and tries both truth
    values in random order. A node is one splitting assignment (first or
    second branch); propagated assignments are free. node_limit <= 0 means
    unlimited. The extra return flag records whether any backtracking
    happened (the first descent is exactly one unit-clause-heuristic pass).
    """
    m = lits.shape[0] // k if k > 0 else 0
    value = np.full(n, -1, np.int8)
    nsat = np.zeros(m, np.int32)
    nun = np.full(m, k, np.int32)
    units = np.empty(max(m, 1), np.int32)
    nunits = 0
    pool = np.arange(1, n + 1).astype(np.int32)
    pos = np.arange(n).astype(np.int32)
    psize = n
    trail = np.empty(n, np.int32)
    tlen = 0
    dec_tpos = np.empty(n + 1, np.int32)
    dec_var = np.empty(n + 1, np.int32)
    dec_val = np.empty(n + 1, np.int8)
    dec_flipped = np.empty(n + 1, np.int8)
    dlen = 0
    nodes = 0
    backtracked = False
    state = _mix(np.uint64(seed))
    conflict = False

    for c in range(m):
        if nun[c] == 0:
            return STATUS_UNSAT, nodes, backtracked, value
        if nun[c] == 1:
            units[nunits] = c
            nunits += 1

    while True:
        while nunits > 0 and not conflict:
            nunits -= 1
            c = units[nunits]
            if nsat[c] > 0:
                continue
            lit = 0
            for t in range(c * k, c * k + k):
                if value[abs(lits[t]) - 1] == -1:
                    lit = lits[t]
                    break
            if lit == 0:
                continue
            v = abs(lit)
            val = 1 if lit > 0 else 0
            conflict, psize, nunits, tlen = _assign(
                v, val, value, pool, pos, psize, nsat, nun,
                occ_start, occ_list, units, nunits, trail, tlen)
        if conflict:
            conflict = False
            backtracked = True
            nunits = 0
            while dlen > 0 and dec_flipped[dlen - 1] == 1:
                dlen -= 1
            if dlen == 0:
                return STATUS_UNSAT, nodes, backtracked, value
            d = dlen - 1
            psize, tlen = _unassign_to(
                dec_tpos[d], value, pool, pos, psize, nsat, nun,
                occ_start, occ_list, trail, tlen)
            dec_flipped[d] = 1
            dec_val[d] = 1 - dec_val[d]
            nodes += 1
            if node_limit > 0 and nodes > node_limit:
                return STATUS_GAVEUP, nodes, backtracked, value
            conflict, psize, nunits, tlen = _assign(
                dec_var[d], dec_val[d], value, pool, pos, psize, nsat, nun,
                occ_start, occ_list, units, nunits, trail, tlen)
            continue
        if psize == 0:
            return STATUS_SAT, nodes, backtracked, value
        idx, state = _rand_below(state, psize)
        v = pool[idx]
        u, state = _rand_u01(state)
        val = 1 if u < 0.5 else 0
        dec_tpos[dlen] = tlen
        dec_var[dlen] = v
        dec_val[dlen] = val
        dec_flipped[dlen] = 0
        dlen += 1
        nodes += 1
        if node_limit > 0 and nodes > node_limit:
            return STATUS_GAVEUP, nodes, backtracked, value
        conflict, psize, nunits, tlen = _assign(
            v, val, value, pool, pos, psize, nsat, nun,
            occ_start, occ_list, units, nunits, trail, tlen)


@njit(cache=True)
def walksat_kernel(n, k, lits, occ_start, occ_list, max_flips, max_tries, noise, gain_greedy, seed):
    """Random-restart local search over full assignments.

    Per step: pick a uniformly random unsatisfied clause; with probability
    ``noise`` flip a uniformly random variable of it, otherwise flip one
    minimizing the break count (satisfied clauses the flip would falsify),
    ties broken uniformly. ``gain_greedy`` switches the greedy score to
    net gain (break minus make). Effort is total flips across tries.
    """
    m = lits.shape[0] // k if k > 0 else 0
    value = np.zeros(n, np.int8)
    ntrue = np.zeros(m, np.int32)
    unsat_list = np.empty(max(m, 1), np.int32)
    unsat_pos = np.full(max(m, 1), -1, np.int32)
    scores = np.empty(max(k, 1), np.int64)
    state = _mix(np.uint64(seed))
    total_flips = 0

    for _try in range(max_tries):
        for i in range(n):
            u, state = _rand_u01(state)
            value[i] = 1 if u < 0.5 else 0
        ucount = 0
        for c in range(m):
            cnt = 0
            for t in range(c * k, c * k + k):
                lit = lits[t]
                if value[abs(lit) - 1] == (1 if lit > 0 else 0):
                    cnt += 1
            ntrue[c] = cnt
            if cnt == 0:
                unsat_pos[c] = ucount
                unsat_list[ucount] = c
                ucount += 1
            else:
                unsat_pos[c] = -1
        if ucount == 0:
            return STATUS_SAT, total_flips, value
        for _step in range(max_flips):
            ci, state = _rand_below(state, ucount)
            c = unsat_list[ci]
            u, state = _rand_u01(state)
            if u < noise:
                j, state = _rand_below(state, k)
            else:
                for jj in range(k):
                    vv = abs(lits[c * k + jj])
                    sat_code = 2 * (vv - 1) + value[vv - 1]
                    br = 0
                    for t in range(occ_start[sat_code], occ_start[sat_code + 1]):
                        if ntrue[occ_list[t]] == 1:
                            br += 1
                    if gain_greedy:
                        fal_code = 2 * (vv - 1) + (1 - value[vv - 1])
                        mk = 0
                        for t in range(occ_start[fal_code], occ_start[fal_code + 1]):
                            if ntrue[occ_list[t]] == 0:
                                mk += 1
                        scores[jj] = br - mk
                    else:
                        scores[jj] = br
                best = scores[0]
                for jj in range(1, k):
                    if scores[jj] < best:
                        best = scores[jj]
                ties = 0
                for jj in range(k):
                    if scores[jj] == best:
                        ties += 1
                pick, state = _rand_below(state, ties)
                j = 0
                for jj in range(k):
                    if scores[jj] == best:
                        if pick == 0:
                            j = jj
                            break
                        pick -= 1
            v = abs(lits[c * k + j])
            old = value[v - 1]
            value[v - 1] = 1 - old
            old_code = 2 * (v - 1) + old
            new_code = 2 * (v - 1) + (1 - old)
            for t in range(occ_start[old_code], occ_start[old_code + 1]):
                cc = occ_list[t]
                ntrue[cc] -= 1
                if ntrue[cc] == 0:
                    unsat_pos[cc] = ucount
                    unsat_list[ucount] = cc
                    ucount += 1
            for t in range(occ_start[new_code], occ_start[new_code + 1]):
                cc = occ_list[t]
                if ntrue[cc] == 0:
                    p = unsat_pos[cc]
                    lastc = unsat_list[ucount - 1]
                    unsat_list[p] = lastc
                    unsat_pos[lastc] = p
                    ucount -= 1
                    unsat_pos[cc] = -1
                ntrue[cc] += 1
            total_flips += 1
            if ucount == 0:
                return STATUS_SAT, total_flips, value
    return STATUS_GAVEUP, total_flips, value


@njit(cache=True, inline="always")
def _uc_lambda(s2, x):
    return (s2[1] + 2.0 * np.sqrt(s2[0] * s2[2])) / (1.0 - x)


@njit(cache=True, inline="always")
def _uc_deriv(x, s3, s2, mf_fb, mt_fb):
    one = 1.0 - x
    a = s2[1] / one
    b = 2.0 * s2[0] / one
    c = 2.0 * s2[2] / one
    det = (1.0 - a) * (1.0 - a) - b * c
    lam = a + np.sqrt(b * c)
    if lam >= 1.0 or det <= 1e-12:
        # terminal-step guard: the boundary check stops integration at the
        # next sample; use the step-start round sums meanwhile
        mf = mf_fb
        mt = mt_fb
    else:
        mf = (0.5 * (1.0 - a) + 0.5 * b) / det
        mt = (0.5 * c + 0.5 * (1.0 - a)) / det
    d3 = np.empty(4)
    d2 = np.empty(3)
    for j in range(4):
        d3[j] = -3.0 * s3[j] / one
    tot = (mt + mf) * one
    for j in range(3):
        d2[j] = -2.0 * s2[j] / one + (mf * (j + 1) * s3[j + 1] + mt * (3 - j) * s3[j]) / tot
    return d3, d2


@njit(cache=True)
def uc_ode_kernel(r, q, step, sample_dx):
    """Integrate the 3-clause / 2-clause density flow with RK4.

    Returns (status, crit_x, samples, nsamples) where status is 0 for a
    subcritical run to x = 1 - 1e-6, 1 when the unit-clause branching
    process turns critical (largest eigenvalue >= 1) at crit_x, and 2 on a
    negative-density integrator failure. Sample rows are
    (x, s30, s31, s32, s33, s20, s21, s22) every sample_dx plus the final
    state.
    """
    denom = (1.0 + q) ** 3 - 1.0
    s3 = np.empty(4)
    s3[0] = 0.0
    s3[1] = r * 3.0 * q / denom
    s3[2] = r * 3.0 * q * q / denom
    s3[3] = r * q * q * q / denom
    s2 = np.zeros(3)
    x = 0.0
    x_end = 1.0 - 1e-6
    max_samples = int(np.ceil(1.0 / sample_dx)) + 3
    samples = np.zeros((max_samples, 8))
    ns = 0
    next_sample = 0.0
    status = 0
    crit_x = -1.0

    while True:
        if ns < max_samples and x >= next_sample - 1e-12:
            samples[ns, 0] = x
            for j in range(4):
                samples[ns, 1 + j] = s3[j]
            for j in range(3):
                samples[ns, 5 + j] = s2[j]
            ns += 1
            next_sample += sample_dx
        lam = _uc_lambda(s2, x)
        if lam >= 1.0:
            status = 1
            crit_x = x
            break
        low = s2[0]
        for j in range(3):
            if s2[j] < low:
                low = s2[j]
        for j in range(4):
            if s3[j] < low:
                low = s3[j]
        if low < -1e-9:
            status = 2
            crit_x = x
            break
        if x >= x_end:
            break
        h = step
        # explicit RK4 needs h well under (1-x) once the decay rates
        # ~ k/(1-x) stiffen toward the endpoint; the cap keeps the scheme
        # stable and deterministic all the way to x_end
        if h > (1.0 - x) / 8.0:
            h = (1.0 - x) / 8.0
        if x + h > x_end:
            h = x_end - x
        one = 1.0 - x
        a = s2[1] / one
        b = 2.0 * s2[0] / one
        c = 2.0 * s2[2] / one
        det = (1.0 - a) * (1.0 - a) - b * c
        mf_fb = (0.5 * (1.0 - a) + 0.5 * b) / det
        mt_fb = (0.5 * c + 0.5 * (1.0 - a)) / det
        k1_3, k1_2 = _uc_deriv(x, s3, s2, mf_fb, mt_fb)
        k2_3, k2_2 = _uc_deriv(x + 0.5 * h, s3 + 0.5 * h * k1_3, s2 + 0.5 * h * k1_2, mf_fb, mt_fb)
        k3_3, k3_2 = _uc_deriv(x + 0.5 * h, s3 + 0.5 * h * k2_3, s2 + 0.5 * h * k2_2, mf_fb, mt_fb)
        k4_3, k4_2 = _uc_deriv(x + h, s3 + h * k3_3, s2 + h * k3_2, mf_fb, mt_fb)
        s3 = s3 + (h / 6.0) * (k1_3 + 2.0 * k2_3 + 2.0 * k3_3 + k4_3)
        s2 = s2 + (h / 6.0) * (k1_2 + 2.0 * k2_2 + 2.0 * k3_2 + k4_2)
        x += h

    if ns < max_samples and (ns == 0 or samples[ns - 1, 0] < x - 1e-15):
        samples[ns, 0] = x
        for j in range(4):
            samples[ns, 1 + j] = s3[j]
        for j in range(3):
            samples[ns, 5 + j] = s2[j]
        ns += 1
    return status, crit_x, samples, ns
