#!/usr/bin/env python3
# Automorphisms, their cycles, and the node orbits they generate.
#
# Nodes in the same orbit are topologically interchangeable: some
# automorphism maps one onto the other.

from graphette import (
    Permutation,
    encode,
    generate_automorphisms,
    orbit_partition,
    split_cycles,
)

# A path on 4 nodes: 0-1-2-3. Its only symmetry is the end-for-end flip.
path = encode(4, [(0, 1), (1, 2), (2, 3)])
auts = generate_automorphisms(path)
print("path 0-1-2-3 automorphisms:")
for p in auts.perms:
    print("  ", p.mapping, "cycles:", split_cycles(p).cycles)

part = orbit_partition(path)
print("orbits:", part.groups())   # ends {0,3} and middles {1,2}

# A 5-cycle is vertex-transitive: 10 automorphisms, one orbit.
ring = encode(5, [(i, (i + 1) % 5) for i in range(5)])
print(f"\n5-cycle: |Aut| = {len(generate_automorphisms(ring))},",
      "orbits:", orbit_partition(ring).groups())

# Splitting one permutation into cycles:
p = Permutation((2, 0, 1, 3, 5, 4))
print("\ncycles of (2,0,1,3,5,4):", split_cycles(p).cycles)

# The Petersen graph: famously symmetric, |Aut| = 120, a single orbit.
outer = [(i, (i + 1) % 5) for i in range(5)]
spokes = [(i, i + 5) for i in range(5)]
inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
petersen = encode(10, outer + spokes + inner)
print(f"\nPetersen graph: |Aut| = {len(generate_automorphisms(petersen))},",
      f"orbit count = {orbit_partition(petersen).orbit_count}")
