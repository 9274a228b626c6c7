"""Data models for the k-Hessian laboratory."""

from .spectrum import EigenvalueVector, ConeMembership, SymMatrix, EigenSystem
from .concavity import (
    Branch, SamplerProfile, ConcavityInstance, BranchConstants, DeficitReport, GridPoint, SearchResult,
    CampaignResult,
)
from .solver import (
    Grid, ScalarField, PsiSpec, BoundarySpec, ProblemSpec, SolverConfig, SolverState, ResidualField,
    EXTERIOR, BOUNDARY, INTERIOR,
)
from .experiment import PogorelovScan, TestFunctionField, QuadraticFit, RigidityRow
from .manifest import RunManifest
from .verification import PropertyResult

__all__ = [
    'EigenvalueVector', 'ConeMembership', 'SymMatrix', 'EigenSystem',
    'Branch', 'SamplerProfile', 'ConcavityInstance', 'BranchConstants', 'DeficitReport',
    'GridPoint', 'SearchResult', 'CampaignResult',
    'Grid', 'ScalarField', 'PsiSpec', 'BoundarySpec', 'ProblemSpec', 'SolverConfig', 'SolverState', 'ResidualField',
    'EXTERIOR', 'BOUNDARY', 'INTERIOR',
    'PogorelovScan', 'TestFunctionField', 'QuadraticFit', 'RigidityRow',
    'RunManifest', 'PropertyResult',
]
