#!/usr/bin/env python3
# Copyright 2026 The actopt Authors
# SPDX-License-Identifier: Apache-2.0
"""Regenerate the bundled BLIF benchmarks in crates/core/benchmarks."""

import itertools
import os
import sys

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "crates", "core", "benchmarks")


class Design:
    def __init__(self, name, comment):
        self.name = name
        self.comment = comment
        self.inputs = []
        self.outputs = []
        self.blocks = []
        self.latches = []

    def lut(self, ins, out, fn):
        """Cell `out = fn(*ins)`, written as its ON-set in ascending minterm order."""
        rows = []
        for m in range(1 << len(ins)):
            bits = [(m >> i) & 1 for i in range(len(ins))]
            if fn(*bits):
                rows.append("".join(str(b) for b in bits) + " 1" if ins else "1")
        self.blocks.append(".names " + " ".join(ins + [out]) + "\n" + "".join(r + "\n" for r in rows))
        return out

    def latch(self, d, q, init=0, clk=None):
        ctrl = f" re {clk}" if clk else ""
        self.latches.append(f".latch {d} {q}{ctrl} {init}\n")
        return q

    def text(self):
        s = f"# {self.comment}\n.model {self.name}\n"
        s += ".inputs " + " ".join(self.inputs) + "\n"
        s += ".outputs " + " ".join(self.outputs) + "\n"
        s += "".join(self.latches)
        s += "".join(self.blocks)
        return s + ".end\n"


def counter3():
    d = Design("counter3", "3-bit binary up counter with synchronous reset")
    d.inputs = ["clk", "rst"]
    d.outputs = ["q0", "q1", "q2"]
    d.lut(["q0", "q1"], "c1", lambda a, b: a & b)
    d.lut(["rst", "q0"], "d0", lambda r, a: (1 - r) & (1 - a))
    d.lut(["rst", "q0", "q1"], "d1", lambda r, a, b: (1 - r) & (a ^ b))
    d.lut(["rst", "c1", "q2"], "d2", lambda r, c, b: (1 - r) & (c ^ b))
    for i in range(3):
        d.latch(f"d{i}", f"q{i}", 0, "clk")
    return d


def toggle1():
    d = Design("toggle1", "1-bit toggle register")
    d.inputs = ["clk"]
    d.outputs = ["q"]
    d.lut(["q"], "d", lambda a: 1 - a)
    d.latch("d", "q", 0, "clk")
    return d


def updown4():
    d = Design("updown4", "4-bit up/down counter with enable and terminal count")
    d.inputs = ["clk", "rst", "en", "up"]
    d.outputs = [f"q{i}" for i in range(4)] + ["tc"]
    q = [f"q{i}" for i in range(4)]
    # decoded direction strobes drive every bit slice
    d.lut(["en", "up"], "inc", lambda e, u: e & u)
    d.lut(["en", "up"], "dec", lambda e, u: e & (1 - u))
    d.lut(["rst"], "run", lambda r: 1 - r)
    for i in range(4):
        lower = q[:i]
        # bit i flips when all lower bits are 1 (up) or all 0 (down)
        d.lut(lower + ["inc"], f"tu{i}", lambda *v: int(all(v)))
        d.lut(lower + ["dec"], f"td{i}", lambda *v: int(all(1 - x for x in v[:-1]) and v[-1]))
        d.lut(["run", q[i], f"tu{i}", f"td{i}"], f"d{i}", lambda r, b, u, w: r & (b ^ (u | w)))
        d.latch(f"d{i}", q[i], 0, "clk")
    d.lut(q + ["up"], "tc", lambda a, b, c, e, u: int((a & b & c & e) if u else not (a | b | c | e)))
    return d


def adder8():
    d = Design("adder8", "8-bit adder built from two 4-bit carry-lookahead blocks")
    a = [f"a{i}" for i in range(8)]
    b = [f"b{i}" for i in range(8)]
    d.inputs = a + b
    d.outputs = [f"s{i}" for i in range(8)] + ["cout"]
    for i in range(8):
        d.lut([a[i], b[i]], f"g{i}", lambda x, y: x & y)
        d.lut([a[i], b[i]], f"p{i}", lambda x, y: x ^ y)
    carries = {0: None}
    for blk in range(2):
        base = 4 * blk
        cin = carries[base]
        for k in range(1, 5):
            idx = base + k
            gs = [f"g{base + j}" for j in range(k)]
            ps = [f"p{base + j}" for j in range(k)]
            ins = gs + ps + ([cin] if cin else [])

            def carry(*v, k=k, has_cin=cin is not None):
                g, p = v[:k], v[k:2 * k]
                c = v[2 * k] if has_cin else 0
                for j in range(k):
                    c = g[j] | (p[j] & c)
                return c

            name = "cout" if idx == 8 else f"c{idx}"
            d.lut(ins, name, carry)
            carries[idx] = name
    for i in range(8):
        if carries[i] is None:
            d.lut([f"p{i}"], f"s{i}", lambda p: p)
        else:
            d.lut([f"p{i}", carries[i]], f"s{i}", lambda p, c: p ^ c)
    return d


def alu_slice():
    d = Design("alu_slice", "4-bit ALU slice: add, and, or, xor selected by op[1:0]")
    a = [f"a{i}" for i in range(4)]
    b = [f"b{i}" for i in range(4)]
    d.inputs = a + b + ["op0", "op1"]
    d.outputs = [f"r{i}" for i in range(4)] + ["cout", "zero"]
    names = ["is_add", "is_and", "is_or", "is_xor"]
    for code, n in enumerate(names):
        d.lut(["op0", "op1"], n, lambda x, y, code=code: int(x + 2 * y == code))
    c = None
    for i in range(4):
        ins = [a[i], b[i]] + ([c] if c else [])
        d.lut(ins, f"sum{i}", lambda *v: v[0] ^ v[1] ^ (v[2] if len(v) > 2 else 0))
        nc = "ci" + str(i + 1)
        d.lut(ins + ["is_add"], nc,
              lambda *v: int(v[-1] and (v[0] + v[1] + (v[2] if len(v) > 3 else 0)) >= 2))
        d.lut([a[i], b[i], f"sum{i}"] + names, f"r{i}",
              lambda x, y, s, ad, an, o, xo: (ad & s) | (an & x & y) | (o & (x | y)) | (xo & (x ^ y)))
        c = nc
    d.lut([c], "cout", lambda v: v)
    d.lut([f"r{i}" for i in range(4)], "zero", lambda *v: int(not any(v)))
    return d


def mult4x4():
    d = Design("mult4x4", "4x4 unsigned array multiplier")
    a = [f"a{i}" for i in range(4)]
    b = [f"b{i}" for i in range(4)]
    d.inputs = a + b
    d.outputs = [f"m{i}" for i in range(8)]
    cols = [[] for _ in range(9)]
    for i, j in itertools.product(range(4), range(4)):
        cols[i + j].append(d.lut([a[i], b[j]], f"pp{i}{j}", lambda x, y: x & y))
    n = 0
    for k in range(8):
        while len(cols[k]) > 1:
            if len(cols[k]) >= 3:
                x, y, z = cols[k][:3]
                del cols[k][:3]
                s = d.lut([x, y, z], f"fs{n}", lambda p, q, r: p ^ q ^ r)
                co = d.lut([x, y, z], f"fc{n}", lambda p, q, r: int(p + q + r >= 2))
            else:
                x, y = cols[k][:2]
                del cols[k][:2]
                s = d.lut([x, y], f"hs{n}", lambda p, q: p ^ q)
                co = d.lut([x, y], f"hc{n}", lambda p, q: p & q)
            n += 1
            cols[k].append(s)
            cols[k + 1].append(co)
        d.lut([cols[k][0]], f"m{k}", lambda v: v)
    return d


def fifo4():
    d = Design("fifo4", "4-entry FIFO controller: pointers, occupancy, full/empty flags")
    d.inputs = ["clk", "rst", "push", "pop"]
    d.outputs = ["full", "empty", "wen", "ren", "waddr0", "waddr1", "raddr0", "raddr1", "count0", "count1", "count2"]
    d.lut(["count0", "count1", "count2"], "full", lambda a, b, c: c & (1 - a) & (1 - b))
    d.lut(["count0", "count1", "count2"], "empty", lambda a, b, c: int(not (a | b | c)))
    d.lut(["push", "full"], "wen", lambda p, f: p & (1 - f))
    d.lut(["pop", "empty"], "ren", lambda p, e: p & (1 - e))
    d.lut(["rst"], "run", lambda r: 1 - r)
    # count changes by +1 on write only, -1 on read only
    d.lut(["wen", "ren", "run"], "cnt_up", lambda w, r, u: w & (1 - r) & u)
    d.lut(["wen", "ren", "run"], "cnt_dn", lambda w, r, u: r & (1 - w) & u)
    d.lut(["wen", "run"], "wstep", lambda w, u: w & u)
    d.lut(["ren", "run"], "rstep", lambda r, u: r & u)
    for p, step in (("wptr", "wstep"), ("rptr", "rstep")):
        d.lut(["run", f"{p}0", step], f"{p}_d0", lambda u, a, s: u & (a ^ s))
        d.lut(["run", f"{p}0", f"{p}1", step], f"{p}_d1", lambda u, a, b, s: u & (b ^ (a & s)))
        d.latch(f"{p}_d0", f"{p}0", 0, "clk")
        d.latch(f"{p}_d1", f"{p}1", 0, "clk")
    cnt = ["count0", "count1", "count2"]

    def next_count(i):
        def f(u, up, dn, a, b, c):
            v = a + 2 * b + 4 * c
            v = (v + up - dn) % 8
            return u & ((v >> i) & 1)
        return f

    for i in range(3):
        d.lut(["run", "cnt_up", "cnt_dn"] + cnt, f"count_d{i}", next_count(i))
        d.latch(f"count_d{i}", cnt[i], 0, "clk")
    for i in range(2):
        d.lut([f"wptr{i}"], f"waddr{i}", lambda v: v)
        d.lut([f"rptr{i}"], f"raddr{i}", lambda v: v)
    return d


def main():
    os.makedirs(OUT, exist_ok=True)
    for gen in (counter3, toggle1, updown4, adder8, alu_slice, mult4x4, fifo4):
        d = gen()
        path = os.path.join(OUT, d.name + ".blif")
        with open(path, "w") as f:
            f.write(d.text())
        print(path, file=sys.stderr)


if __name__ == "__main__":
    main()
