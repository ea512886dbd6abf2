"""The presented space A_g, the V families, psi, and the lemma checks."""
from .lemmas import (EXACT_COL_CAP, Workspace, counting_identities, verify_all, verify_claims,
                     verify_eliminatev3, verify_newrelation1, verify_newrelation2, verify_presentation,
                     verify_psiinjective, verify_v1injective)
from .space import (PRESENTATION_BUDGET, Presentation, RelationTable, VCatalog, XGenerator, enumerate_generators,
                    enumerate_relations, enumerate_V, psi_matrix)

__all__ = [
    "EXACT_COL_CAP", "PRESENTATION_BUDGET", "Presentation", "RelationTable", "VCatalog", "Workspace", "XGenerator",
    "counting_identities", "enumerate_V", "enumerate_generators", "enumerate_relations", "psi_matrix",
    "verify_all", "verify_claims", "verify_eliminatev3", "verify_newrelation1", "verify_newrelation2",
    "verify_presentation", "verify_psiinjective", "verify_v1injective",
]
