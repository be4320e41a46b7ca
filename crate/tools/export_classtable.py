#!/usr/bin/env python3
"""Export class-level data from the GAP Character Table Library (ctbllib).

Reads the raw `.tbl` data files shipped with ctbllib and writes one
`%classtable` file per requested table: class names, element orders,
class sizes, the p-th power map for every prime p up to the largest
element order, and the outer automorphism action on classes.

ctbllib stores power maps only for primes dividing |G|. Power maps at the
remaining primes are the Galois action sigma_p on classes, recovered by
matching the Galois-conjugated character columns against the table. Where
ctbllib does store a map, the recomputed one is checked against it.

The automorphism action is read from the class fusion into `G.2`
(all sporadic groups and the small PSL tables used here have |Out| <= 2).

Usage:
    export_classtable.py DATA_DIR OUT_DIR NAME[=OUTER] ...

e.g. `export_classtable.py ctbllib/data out J1 He=He.2 Suz=Suz.2`.
"""

import cmath
import math
import os
import re
import sys


class Sym(str):
    pass


class Parser:
    def __init__(self, text, pos=0):
        self.s = text
        self.i = pos

    def ws(self):
        while self.i < len(self.s) and self.s[self.i] in " \t\r\n":
            self.i += 1

    def value(self):
        self.ws()
        c = self.s[self.i]
        if c == "[":
            return self.list_()
        if c == '"':
            return self.string()
        return self.expr()

    def string(self):
        self.i += 1
        out = []
        while self.s[self.i] != '"':
            if self.s[self.i] == "\\":
                self.i += 1
            out.append(self.s[self.i])
            self.i += 1
        self.i += 1
        return "".join(out)

    def list_(self):
        self.i += 1
        items = []
        expect_value = True
        while True:
            self.ws()
            c = self.s[self.i]
            if c == "]":
                self.i += 1
                return items
            if c == ",":
                if expect_value:
                    items.append(None)
                self.i += 1
                expect_value = True
                continue
            items.append(self.value())
            expect_value = False

    def expr(self):
        depth = 0
        start = self.i
        while True:
            c = self.s[self.i]
            if c in "([":
                depth += 1
            elif c in ")]":
                if depth == 0:
                    break
                depth -= 1
            elif c == "," and depth == 0:
                break
            self.i += 1
        text = "".join(self.s[start:self.i].split())
        if re.fullmatch(r"[A-Za-z_]+", text):
            return Sym(text)
        return text


def find_call(data_dir, head, name, extra=None):
    pat = '%s("%s"' % (head, name)
    if extra is not None:
        pat += ',"%s"' % extra
    pat += ","
    for fn in sorted(os.listdir(data_dir)):
        if not fn.endswith(".tbl"):
            continue
        s = open(os.path.join(data_dir, fn), encoding="latin-1").read()
        for m in re.finditer(re.escape(pat), s):
            if m.start() == 0 or s[m.start() - 1] == "\n":
                p = Parser(s, m.end() - 1)
                args = []
                while True:
                    p.ws()
                    c = p.s[p.i]
                    if c == ")":
                        return args
                    p.i += 1  # skip '(' or ','
                    args.append(p.value())
    return None


def build_char_evaluator(irr):
    """Return eval_char(j, c, a): value of character j at class c, twisted by sigma_a."""
    compiled = {}

    def comp(expr):
        if expr not in compiled:
            compiled[expr] = compile(expr.replace("^", "**"), "<cyc>", "eval")
        return compiled[expr]

    def ev(expr, a):
        env = {"E": lambda n: cmath.exp(2j * math.pi * (a % n) / n)}
        return complex(eval(comp(expr), env))

    def eval_char(j, c, a):
        ch = irr[j]
        if isinstance(ch[0], Sym):
            kind, args = ch[0], [int(x) for x in ch[1]]
            if kind == "GALOIS":
                return eval_char(args[0] - 1, c, a * args[1])
            if kind == "TENSOR":
                return eval_char(args[0] - 1, c, a) * eval_char(args[1] - 1, c, a)
            raise ValueError("unsupported irreducible encoding %s" % kind)
        return ev(ch[c], a)

    return eval_char


def primes_upto(n):
    return [p for p in range(2, n + 1) if all(p % d for d in range(2, int(p ** 0.5) + 1))]


def class_letters(i):
    if i < 26:
        return chr(ord("A") + i)
    return chr(ord("A") + i % 26) + str(i // 26)


def export(data_dir, name, outer):
    args = find_call(data_dir, "MOT", name)
    if args is None:
        raise SystemExit("table %s not found" % name)
    _, cents, powmaps, irr = args[:4]
    cents = [int(x) for x in cents]
    k = len(cents)
    order = cents[0]
    powmaps = {p: [int(x) - 1 for x in m] for p, m in enumerate(powmaps, start=1) if m is not None}

    # element orders from the pre-period of iterated p-power maps
    orders = []
    for c in range(k):
        n = 1
        for p, m in powmaps.items():
            seen = []
            x = c
            while x not in seen:
                seen.append(x)
                x = m[x]
            n *= p ** seen.index(x)
        orders.append(n)
    maxord = max(orders)

    eval_char = build_char_evaluator(irr)
    cols = [[eval_char(j, c, 1) for j in range(k)] for c in range(k)]
    by_order = {}
    for c, n in enumerate(orders):
        by_order.setdefault(n, []).append(c)

    def galois_image(c, a):
        n = orders[c]
        if n <= 2 or a % n == 1:
            return c
        target = [eval_char(j, c, a) for j in range(k)]
        hits = [d for d in by_order[n]
                if all(abs(u - v) <= 1e-6 * max(1.0, abs(v)) for u, v in zip(cols[d], target))]
        if len(hits) != 1:
            raise SystemExit("%s: ambiguous Galois image for class %d, a=%d: %s" % (name, c, a, hits))
        return hits[0]

    full = {}
    for p in primes_upto(maxord):
        m = []
        for c in range(k):
            if orders[c] % p == 0:
                m.append(powmaps[p][c])
            else:
                img = galois_image(c, p)
                if p in powmaps and powmaps[p][c] != img:
                    raise SystemExit("%s: recomputed %d-power map disagrees at class %d" % (name, p, c))
                m.append(img)
        full[p] = m

    names = []
    count = {}
    for n in orders:
        i = count.get(n, 0)
        count[n] = i + 1
        names.append("%d%s" % (n, class_letters(i)))

    autgens = []
    if outer:
        fus = find_call(data_dir, "ALF", name, outer)
        if fus is None:
            raise SystemExit("fusion %s -> %s not found" % (name, outer))
        fmap = [int(x) for x in fus[0]]
        orbits = {}
        for c, img in enumerate(fmap):
            orbits.setdefault(img, []).append(c)
        cycles = [o for o in orbits.values() if len(o) > 1]
        if any(len(o) != 2 for o in cycles):
            raise SystemExit("%s: fusion into %s is not an involution on classes" % (name, outer))
        autgens.append(cycles)

    lines = []
    lines.append("# %s: exported from the GAP Character Table Library (ctbllib)" % name)
    lines.append("# power maps at primes not dividing |G| recomputed from the Galois action on irreducibles")
    if outer:
        lines.append("# automorphism action read from the class fusion %s -> %s" % (name, outer))
    lines.append("%%classtable %s order %d" % (name, order))
    for c in range(k):
        lines.append("class %s order %d size %d" % (names[c], orders[c], order // cents[c]))
    for p, m in full.items():
        lines.append("powermap %d: %s" % (p, " ".join(names[x] for x in m)))
    for cycles in autgens:
        lines.append("autgen: %s" % "".join("(%s)" % " ".join(names[x] for x in o) for o in cycles))
    return "\n".join(lines) + "\n", orders, full, autgens


def main():
    data_dir, out_dir = sys.argv[1], sys.argv[2]
    os.makedirs(out_dir, exist_ok=True)
    for spec in sys.argv[3:]:
        name, _, outer = spec.partition("=")
        text, *_ = export(data_dir, name, outer or None)
        fn = re.sub(r"[^A-Za-z0-9]+", "_", name).strip("_").lower()
        with open(os.path.join(out_dir, fn + ".ctbl"), "w") as f:
            f.write(text)
        print("wrote", fn + ".ctbl", file=sys.stderr)


if __name__ == "__main__":
    main()
