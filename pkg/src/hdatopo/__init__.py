"""Simplicial complexes, precubical sets and higher-dimensional automata.

Pipeline: a connected simplicial complex ``K`` -> its cubical barycentric
subdivision as an HDA -> an accessible HDA with the same homology -> a
shared-variable system whose HDA model is isomorphic to it.
"""
from .accessibility import Certificate, make_accessible
from .coskeleton import HmReport, LabelRelation, hda_model, verify_hda_model
from .geom import CubeCoords, delta_compat_check, f_cube, g_point, roundtrip_check, sort_permutation
from .hda import (Hda, HdaClassification, classify, hda_isomorphism, hda_P, is_codeterministic,
                  is_deterministic, is_extensional, to_transition_system)
from .homology import (ChainComplex, HomologyGroups, compare, cubical_chain_complex, homology,
                       pcs_homology, smith_normal_form)
from .precubical import (PcsMorphism, PrecubicalSet, ValidationReport, euler_characteristic, interval,
                         is_isomorphic, pushout, tensor, truncate, validate)
from .simplicial import (SimplicialComplex, cubical_subdivision, from_facets, load_fixture,
                         simplicial_chain_complex)
from .svs import (Action, ProgramGraph, SharedVariableSystem, VariableSpec, hda_model_of_svs, realize,
                  state_graph, svs_from_hda, transition_system_model)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
