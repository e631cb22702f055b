import numpy as np
from hypothesis import strategies as st

from projray.sampling import complex_gaussian, random_unit_vector, random_unitary, rng_from

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=2, max_value=8)

E1 = np.array([1, 0], dtype=complex)
E2 = np.array([0, 1], dtype=complex)
PLUS = (E1 + E2) / np.sqrt(2)
PLUS_I = (E1 + 1j * E2) / np.sqrt(2)

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)


def unit(seed, n):
    return random_unit_vector(rng_from(seed), n)


def gaussian(seed, *shape):
    return complex_gaussian(rng_from(seed), *shape)


def ray_distance(a, b):
    """d_R from raw vectors, independent of the Ray class.

    Uses the angle between b and its projection onto a, which keeps full
    precision for nearly equal rays where arccos does not.
    """
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    s = np.vdot(a, b)
    return float(np.arctan2(np.linalg.norm(b - s * a), abs(s)))


def union_find_partition(vectors, tol=1e-10):
    """Reference partition: union-find over pairs with |<v_i, v_j>| > tol."""
    V = [v / np.linalg.norm(v) for v in vectors]
    parent = list(range(len(V)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(V)):
        for j in range(i + 1, len(V)):
            if abs(np.vdot(V[i], V[j])) > tol:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(len(V)):
        groups.setdefault(find(i), set()).add(i)
    return sorted(groups.values(), key=min)


def planted(seed, n_blocks, n_max=12):
    """Random rays inside mutually orthogonal blocks, each block connected."""
    rng = rng_from(seed)
    sizes = [int(rng.integers(1, 4)) for _ in range(n_blocks)]
    while sum(sizes) > n_max:
        sizes[int(np.argmax(sizes))] -= 1
    U = random_unitary(rng, sum(sizes))
    vectors, labels, offset = [], [], 0
    for b, d in enumerate(sizes):
        Q = U[:, offset:offset + d]
        for _ in range(int(rng.integers(1, 5))):
            vectors.append(Q @ (rng.standard_normal(d) + 1j * rng.standard_normal(d)))
            labels.append(b)
        offset += d
    order = rng.permutation(len(vectors))
    vectors = [vectors[i] for i in order]
    labels = [labels[i] for i in order]
    truth = {}
    for i, b in enumerate(labels):
        truth.setdefault(b, set()).add(i)
    return vectors, sorted(truth.values(), key=min), U, sizes
