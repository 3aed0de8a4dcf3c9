# %% [markdown]
# Operator identities of the three-mode algebra, checked numerically.
# Every generator is built as a sparse matrix on the fixed-N Fock basis.

# %%
import numpy as np

from spinorsim import OperatorKind as K, operator_matrix, verify_identities
from spinorsim.fock import BlockKey, enumerate_block

# %%
# The (N=2, m=0) block holds |1,0,1> and |0,2,0>, ordered by n_zero.
print(enumerate_block(2, 0).states)
print(operator_matrix(K.L2, BlockKey(2, 0)).toarray())

# %%
# Full identity report at N = 12. The singlet relation needs coefficient 3;
# coefficient 1 misses by a wide margin.
report = verify_identities(12)
for line in report.lines():
    print(line)
print("printed singlet coefficient deviation:", report.printed_singlet_deviation)
print("disentangling coefficient that matches:", report.bch_matches)
