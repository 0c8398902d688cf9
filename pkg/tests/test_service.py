import jsonschema
import pytest
from fastapi.testclient import TestClient

from flowsum.document import load_schema
from flowsum.graph import maximal_influence_graph, write_edge_tsv
from flowsum.service import create_app
from flowsum.synth import layered_graph


def planted():
    g, _ = layered_graph(
        layers=3, per_layer=12, p_chain=0.35, p_noise=0.03, seed=11,
        connect_source=True,
    )
    return g


@pytest.fixture(scope="module")
def graph():
    return planted()


@pytest.fixture(scope="module")
def client(graph):
    app = create_app(graph=graph)
    with TestClient(app) as c:
        yield c


BODY = {"source": "n0", "k": 3, "l": 6, "seed": 5}


class TestMeta:
    def test_reports_graph_stats(self, client, graph):
        r = client.get("/api/meta")
        assert r.status_code == 200
        body = r.json()
        assert body["nodes"] == graph.node_count
        assert body["links"] == graph.edge_count
        assert body["has_metadata"] is True
        assert body["defaults"]["k"] == 10

    def test_503_until_graph_is_loaded(self, tmp_path, graph):
        edges = tmp_path / "edges.tsv"
        write_edge_tsv(graph, edges)
        app = create_app(str(edges))
        # no lifespan: the loader never ran, so the service is not ready
        c = TestClient(app)
        assert c.get("/api/meta").status_code == 503
        assert c.post("/api/summarize", json=BODY).status_code == 503
        assert c.get("/api/cluster/abc/0/members").status_code == 503


class TestNodeSearch:
    def test_finds_title_substring(self, client, graph):
        needle = graph.meta[5].title.split()[0]
        r = client.get("/api/nodes", params={"query": needle})
        assert r.status_code == 200
        body = r.json()
        assert body["hits"]
        assert all(needle in h["title"] for h in body["hits"])
        assert {"id", "title", "in_degree", "year", "venue"} <= set(body["hits"][0])

    def test_caps_hits_at_50(self, client):
        r = client.get("/api/nodes", params={"query": ""})
        body = r.json()
        assert len(body["hits"]) <= 50
        assert body["total"] == 36

    def test_hits_sorted_by_indegree(self, client):
        hits = client.get("/api/nodes").json()["hits"]
        degs = [h["in_degree"] for h in hits]
        assert degs == sorted(degs, reverse=True)

    def test_no_match_is_empty(self, client):
        assert client.get("/api/nodes", params={"query": "zzzzqq"}).json()["hits"] == []


class TestSummarize:
    def test_roundtrip_document(self, client):
        r = client.post("/api/summarize", json=BODY)
        assert r.status_code == 200
        doc = r.json()
        jsonschema.validate(doc, load_schema())
        assert doc["cached"] is False or doc["cached"] is True
        assert len(doc["job"]) == 12
        assert doc["source"] == "n0"
        assert len(doc["clusters"]) <= 3
        assert all("members" not in c for c in doc["clusters"])

    def test_repeat_is_cached_and_identical(self, client):
        body = dict(BODY, seed=6)
        first = client.post("/api/summarize", json=body)
        second = client.post("/api/summarize", json=body)
        a, b = first.json(), second.json()
        assert a.pop("cached") is False
        assert b.pop("cached") is True
        assert a == b

    def test_source_scopes_the_graph(self, client, graph):
        # a source in the last layer reaches only a handful of nodes
        sub = maximal_influence_graph(graph, "n24")
        r = client.post(
            "/api/summarize", json={"source": "n24", "k": 2, "l": 2, "seed": 1}
        )
        if sub.node_count >= 2:
            assert r.status_code == 200
            assert sum(c["size"] for c in r.json()["clusters"]) == sub.node_count
        else:
            assert r.status_code == 400

    def test_l_zero_is_400(self, client):
        r = client.post("/api/summarize", json=dict(BODY, l=0))
        assert r.status_code == 400

    def test_l_above_k_squared_is_400(self, client):
        assert client.post("/api/summarize", json=dict(BODY, l=10)).status_code == 400

    def test_k_out_of_range_is_400(self, client):
        assert client.post("/api/summarize", json=dict(BODY, k=1)).status_code == 400
        assert client.post("/api/summarize", json=dict(BODY, k=41)).status_code == 400

    def test_k_exceeding_subgraph_is_400(self, client, graph):
        sub = maximal_influence_graph(graph, "n35")
        k = min(40, sub.node_count + 1)
        r = client.post("/api/summarize", json={"source": "n35", "k": max(k, 2)})
        assert r.status_code == 400

    def test_unknown_source_is_404(self, client):
        r = client.post("/api/summarize", json=dict(BODY, source="ghost"))
        assert r.status_code == 404

    def test_missing_source_is_400(self, client):
        assert client.post("/api/summarize", json={"k": 3}).status_code == 400

    def test_unknown_field_is_400(self, client):
        r = client.post("/api/summarize", json=dict(BODY, widen=True))
        assert r.status_code == 400
        assert "widen" in r.json()["detail"]

    def test_bad_similarity_is_400(self, client):
        r = client.post("/api/summarize", json=dict(BODY, similarity="psychic"))
        assert r.status_code == 400

    def test_bool_k_is_400(self, client):
        assert client.post("/api/summarize", json=dict(BODY, k=True)).status_code == 400

    def test_malformed_json_is_400(self, client):
        r = client.post(
            "/api/summarize",
            content=b"not json",
            headers={"content-type": "application/json"},
        )
        assert r.status_code == 400

    def test_augment_echoed(self, client):
        body = dict(BODY, augment="venue", augment_time=True)
        r = client.post("/api/summarize", json=body)
        assert r.status_code == 200
        echo = r.json()["config"]
        assert echo["use_attribute"] is True
        assert echo["attribute"] == "venue"
        assert echo["use_time"] is True


@pytest.fixture(scope="module")
def job(client):
    doc = client.post("/api/summarize", json=BODY).json()
    return doc["job"], doc["clusters"]


class TestMembers:
    def test_pages_cover_the_cluster(self, client, job):
        job_id, clusters = job
        cid, size = clusters[0]["id"], clusters[0]["size"]
        seen = []
        offset = 0
        while True:
            r = client.get(
                f"/api/cluster/{job_id}/{cid}/members",
                params={"limit": 5, "offset": offset},
            )
            assert r.status_code == 200
            page = r.json()
            assert page["total"] == size
            seen.extend(m["id"] for m in page["members"])
            if not page["has_more"]:
                break
            offset += 5
        assert len(seen) == size
        assert len(set(seen)) == size

    def test_sorted_by_indegree_desc(self, client, job):
        job_id, clusters = job
        cid = clusters[0]["id"]
        r = client.get(f"/api/cluster/{job_id}/{cid}/members")
        rows = r.json()["members"]
        degs = [m["in_degree"] for m in rows]
        assert degs == sorted(degs, reverse=True)
        assert {"id", "title", "year", "venue", "in_degree"} <= set(rows[0])

    def test_sample_members_match_top_of_listing(self, client, job):
        job_id, clusters = job
        c = clusters[0]
        r = client.get(f"/api/cluster/{job_id}/{c['id']}/members")
        top = [m["id"] for m in r.json()["members"][: len(c["sample_members"])]]
        assert top == c["sample_members"]

    def test_page_past_end_is_empty(self, client, job):
        job_id, clusters = job
        cid, size = clusters[0]["id"], clusters[0]["size"]
        r = client.get(
            f"/api/cluster/{job_id}/{cid}/members", params={"offset": size + 10}
        )
        page = r.json()
        assert page["members"] == []
        assert page["has_more"] is False

    def test_unknown_job_is_404(self, client):
        assert client.get("/api/cluster/feedfeedfeed/0/members").status_code == 404

    def test_unknown_cluster_is_404(self, client, job):
        job_id, clusters = job
        r = client.get(f"/api/cluster/{job_id}/{len(clusters) + 5}/members")
        assert r.status_code == 404

    def test_bad_paging_params_are_400(self, client, job):
        job_id, _ = job
        base = f"/api/cluster/{job_id}/0/members"
        assert client.get(base, params={"limit": 0}).status_code == 400
        assert client.get(base, params={"limit": 51}).status_code == 400
        assert client.get(base, params={"offset": -1}).status_code == 400
        assert client.get(base, params={"sort": "alphabetical"}).status_code == 400
