import numpy as np

from nlpot.circlepack import CirclePackConfig, from_generated, pack_disk
from nlpot.generators import triangulated_disk
from nlpot.packing import contact_graph, packing_metric, verify_packing


def main():
    t = from_generated(triangulated_disk(3))
    dp = pack_disk(t, np.ones(len(t.boundary)), CirclePackConfig(tolerance=1e-10))
    assert dp.tangency_residual < 1e-7
    assert verify_packing(dp.packing, tol=1e-6).valid
    cg = contact_graph(dp.packing, tol=1e-6)
    assert cg.edge_set() == {(u, v) for u, v in t.graph.edges.tolist()}
    m = packing_metric(dp.packing, cg)
    assert (m > 0).all()
