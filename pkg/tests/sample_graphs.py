"""Hand-checked graph texts shared across the test modules.

The derived numbers next to each text (token counts, triple counts, depth,
score) were worked out by hand and cross-checked with an independent pass
over the definitions before being frozen here.
"""

# Three variables, one reentrancy (b is claimed by :arg0 and referenced
# again under go-02).  Byte-exact serializer output for the parsed graph.
WANT_GO = """(w / want-01
    :arg0 (b / boy)
    :arg1 (g / go-02
        :arg0 b))"""

# A near-miss pair: the prediction roots the graph at the boy and uses the
# inverse :arg0-of instead of :arg0.  Three instance triples and :source
# match, the inverted edge does not: matched 4 of 5 on both sides, so
# precision = recall = F1 = 0.8.
SING_GOLD = """(s / sing-01
    :arg0 (b / boy
        :source (c / college)))"""

SING_PRED = """(b / boy
    :arg0-of (s / sing-01)
    :source (c / college))"""

# Twelve variables, nesting depth 7 (a > s > d > a2 > c > w2 > n > op1),
# one reentrancy (t), three attribute triples (:wiki and two name ops).
# Relation labels are deliberately uppercase; parsing lowercases them.
DEEP_NESTED = """(a / accelerate-01
    :ARG0 (t / this)
    :ARG1 (s / speed-01
        :ARG0 t
        :ARG1 (d / desertification
            :location (a2 / and
                :op1 (c / country
                    :location (w2 / world-region
                        :wiki "Sub-Saharan_Africa"
                        :name (n / name
                            :op1 "Sub-Saharan"
                            :op2 "Africa")))
                :op2 (a3 / area
                    :part-of (w / world)
                    :mod (o / other)))))
    :time (u / ultimate))"""

SINGLE_NODE = "(r / rain-01)"

# 11 tokens: ( w / want-01 :arg0 ( b / boy ) )
FRAGMENT = "(w / want-01 :arg0 (b / boy))"
