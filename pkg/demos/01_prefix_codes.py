"""Canonical prefix-free codes from a length profile.

Any length profile satisfying Kraft's inequality sum(2**-l) <= 1 is
realizable; the canonical construction assigns consecutive binary
fractions after sorting by (length, block), so the codebook is a pure
function of the profile.
"""

from fractions import Fraction

from fiberlab import Alphabet, canonical_kraft_code, enumerate_word, is_prefix_free, kraft_sum, shannon_length

profile = {"sun": 1, "rain": 3, "snow": 3, "fog": 3, "hail": 4, "wind": 4}
book = canonical_kraft_code(profile)
print("length profile:", profile)
print("kraft sum:", kraft_sum(profile.values()))
for block, word in sorted(book.entries.items(), key=lambda kv: (len(kv[1]), kv[1])):
    print(f"  {block:>5} -> {word}")
print("prefix free:", is_prefix_free(book.entries.values()))

print()
print("Shannon lengths ceil(-log2 p) are always feasible:")
for p in (Fraction(1, 2), Fraction(1, 3), Fraction(1, 5), Fraction(3, 7)):
    print(f"  p = {p}: length {shannon_length(p)}")

print()
print("words in length-then-lexicographic order over {0,1}:")
binary = Alphabet(("0", "1"))
print(" ", [enumerate_word(binary, i).text() or "(empty)" for i in range(10)])
