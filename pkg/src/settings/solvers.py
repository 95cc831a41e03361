import os


TOL_KKT = float(os.getenv('CAMPC_TOL_KKT', 1e-8))

ITERATION_FACTOR = 50

STEP_TOL = 1e-12

MEMBERSHIP_TOL = 1e-9

FEASIBILITY_TOL = float(os.getenv('CAMPC_FEASIBILITY_TOL', 1e-7))

SYMMETRY_TOL = 1e-12

DEGENERATE_RHO = 1e-12

PIVOT_THRESHOLD = 1e-12

NEGATIVE_ENTRY_TOL = 1e-12

LP_FEASIBILITY_TOL = 1e-10

DUAL_SIMPLEX_RATIO = 4
