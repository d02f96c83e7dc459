from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel

from magic.constants import FeasibilityReport, OrderScan
from magic.pca import SpectrumReport
from magic.search import CountTable
from magic.symmetry import CrossPairReport, DivisibilityCheck, OrbitReport

# --- Command Output Schemas ---

class ValidationSummary(BaseModel):
    """Result of `validate`"""
    graph_id: str
    n: int
    pentagons: int
    hexagons: int
    edges: int
    valid: bool = True

class AutReport(BaseModel):
    """Automorphism group order and a generating set (1-based images)"""
    graph_id: str
    order: int
    generators: List[Tuple[int, ...]]

class OrbitsDocument(BaseModel):
    """Result of `orbits`"""
    graph_id: str
    group_order: int
    free_action: bool
    orbits: OrbitReport
    cross_pair: Optional[CrossPairReport] = None  # needs the complement pair's solutions

class ComplementCheck(BaseModel):
    sp: int
    sh: int
    complement_sp: int
    complement_sh: int
    counts_equal: bool

class ReportDocument(BaseModel):
    """Feasibility, counts and symmetry checks in one document"""
    graph_id: str
    feasibility: FeasibilityReport
    counts: CountTable
    group_order: int
    divisibility: List[DivisibilityCheck]
    complements: List[ComplementCheck]

class ScanDocument(BaseModel):
    """Result of `scan`"""
    start: int
    stop: int
    orders: List[OrderScan]

class PcaDocument(BaseModel):
    """Result of `pca --all-pairs`: one spectrum per feasible pair"""
    graph_id: str
    spectra: List[SpectrumReport]

class RunManifest(BaseModel):
    """Written as run-manifest.json next to the artifacts of a run"""
    command: str
    graph_source: str
    parameters: Dict[str, object]
    wall_time_seconds: float
    workers: int
    outputs: List[str]
    partial: bool
    exit_code: int
    metrics: Dict[str, float]
    summary: Dict[str, object] = {}
