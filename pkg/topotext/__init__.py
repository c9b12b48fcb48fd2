from topotext._sync_source import CorpusSource as CorpusSource
from topotext.async_source import AsyncCorpusSource as AsyncCorpusSource
from topotext.clustering import ClusterCount as ClusterCount
from topotext.clustering import FirstGap as FirstGap
from topotext.clustering import Threshold as Threshold
from topotext.clustering import agglomerate as agglomerate
from topotext.clustering import cut as cut
from topotext.complex import build_rips as build_rips
from topotext.complex import complex_at as complex_at
from topotext.diagramtools import bottleneck as bottleneck
from topotext.diagramtools import eval_landscape as eval_landscape
from topotext.diagramtools import landscape as landscape
from topotext.diagramtools import mean_landscape as mean_landscape
from topotext.diagramtools import wasserstein as wasserstein
from topotext.embed import coordinate_projection as coordinate_projection
from topotext.embed import truncated_svd as truncated_svd
from topotext.mapper import build_cover as build_cover
from topotext.mapper import build_mapper as build_mapper
from topotext.mapper import cluster_purity as cluster_purity
from topotext.mapper import term_summary as term_summary
from topotext.metricspace import DistanceMatrix as DistanceMatrix
from topotext.metricspace import PointCloud as PointCloud
from topotext.metricspace import pairwise_distances as pairwise_distances
from topotext.persistence import PersistenceDiagram as PersistenceDiagram
from topotext.persistence import persistent_homology as persistent_homology
from topotext.pipeline import Pipeline as Pipeline
from topotext.textpipeline import Corpus as Corpus
from topotext.textpipeline import load_corpus as load_corpus
from topotext.textpipeline import tfidf as tfidf
