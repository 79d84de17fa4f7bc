"""HTTP API contract: endpoints, status codes, consumer adjustments."""

import pytest
from fastapi.testclient import TestClient

from tablevet.api import create_app
from tablevet.appraisal import ConsumerState, report_for_state
from tablevet.service import gather_inputs

from conftest import REPORT_NOW, REPORT_NOW_RAW


@pytest.fixture()
def client(service_config):
    app = create_app(service_config)
    with TestClient(app) as test_client:
        yield test_client


@pytest.fixture()
def table_id(imported_store):
    return imported_store[1]


class TestReads:
    def test_list_tables(self, client, table_id):
        body = client.get("/api/v1/tables").json()
        assert body["tables"] == [{"id": table_id, "title": "python matrices"}]

    def test_report_matches_direct_assembly(self, client, table_id,
                                            imported_store, service_config):
        response = client.get(f"/api/v1/tables/{table_id}/report",
                              params={"now": REPORT_NOW_RAW})
        assert response.status_code == 200
        store, _ = imported_store
        inputs = gather_inputs(store, table_id, REPORT_NOW, service_config)
        expected = report_for_state(inputs, ConsumerState.initial()).to_dict()
        assert response.json() == expected

    def test_unknown_table_404(self, client):
        assert client.get("/api/v1/tables/nope/report").status_code == 404

    def test_bad_now_400(self, client, table_id):
        response = client.get(f"/api/v1/tables/{table_id}/report",
                              params={"now": "yesterday-ish"})
        assert response.status_code == 400

    def test_timeline_endpoint(self, client, table_id):
        body = client.get(f"/api/v1/tables/{table_id}/timeline",
                          params={"now": REPORT_NOW_RAW}).json()
        assert body["state"] == "ok"
        shades = []
        for entry in body["timeline"]["entries"]:
            shades.append(entry["shade_index"])
            shades.extend(p["shade_index"] for p in entry["pages"])
        assert sorted(shades) == list(range(body["timeline"]["node_count"]))

    def test_alternatives_endpoint(self, client, table_id):
        body = client.get(f"/api/v1/tables/{table_id}/alternatives",
                          params={"now": REPORT_NOW_RAW}).json()
        assert body["state"] == "ok"
        assert body["alternatives"][0]["name"] == "pandas dataframe"

    def test_snapshot_endpoint(self, client, table_id):
        body = client.get(
            f"/api/v1/tables/{table_id}/snippets/s1/snapshot").json()
        assert body["includes_question_block"] is True
        assert "highlight" in body
        missing = client.get(f"/api/v1/tables/{table_id}/snippets/zz/snapshot")
        assert missing.status_code == 404


class TestConsumerState:
    def test_whitelist_roundtrip_and_recompute(self, client, table_id):
        headers = {"X-Consumer-Id": "consumer-wl"}
        base = client.get("/api/v1/consumer/whitelist", headers=headers).json()
        assert len(base["domains"]) == 25

        # drop medium.com -> its snippets become untrusted on the next report
        domains = [d for d in base["domains"] if d != "medium.com"]
        put = client.put("/api/v1/consumer/whitelist",
                         json={"domains": domains}, headers=headers)
        assert put.status_code == 200
        report = client.get(f"/api/v1/tables/{table_id}/report",
                            params={"now": REPORT_NOW_RAW}, headers=headers).json()
        trust = report["facets"]["trustworthiness"]
        flagged = {i["domain"] for i in trust["issues"]
                   if i["kind"] == "untrusted_domain" and i["status"] == "open"}
        assert flagged == {"medium.com", "techgeekbuzz.com"}
        assert trust["badge"] == {"level": "red", "open_issues": 3}

    def test_put_whitelist_requires_consumer(self, client):
        response = client.put("/api/v1/consumer/whitelist",
                              json={"domains": []})
        assert response.status_code == 401

    def test_adjustment_flow(self, client, table_id):
        headers = {"X-Consumer-Id": "consumer-adj"}
        before = client.get(f"/api/v1/tables/{table_id}/report",
                            params={"now": REPORT_NOW_RAW}, headers=headers).json()
        assert before["facets"]["trustworthiness"]["badge"] \
            == {"level": "red", "open_issues": 2}

        response = client.post(
            "/api/v1/consumer/adjustments",
            json={"action": "add_trusted", "domain": "techgeekbuzz.com",
                  "table_id": table_id, "now": REPORT_NOW_RAW},
            headers=headers)
        assert response.status_code == 200
        after = response.json()["report"]
        assert after["facets"]["trustworthiness"]["badge"] \
            == {"level": "yellow", "open_issues": 1}

        # the adjustment persisted: a fresh report sees it too
        refetched = client.get(f"/api/v1/tables/{table_id}/report",
                               params={"now": REPORT_NOW_RAW},
                               headers=headers).json()
        assert refetched == after

    def test_adjustment_requires_consumer(self, client, table_id):
        response = client.post("/api/v1/consumer/adjustments",
                               json={"action": "dismiss", "issue_id": "x",
                                     "table_id": table_id})
        assert response.status_code == 401

    def test_unknown_issue_404(self, client, table_id):
        response = client.post(
            "/api/v1/consumer/adjustments",
            json={"action": "dismiss", "issue_id": "bogus",
                  "table_id": table_id, "now": REPORT_NOW_RAW},
            headers={"X-Consumer-Id": "consumer-x"})
        assert response.status_code == 404

    def test_invalid_body_400(self, client, table_id):
        response = client.post(
            "/api/v1/consumer/adjustments",
            json={"action": "warp", "table_id": table_id},
            headers={"X-Consumer-Id": "consumer-x"})
        assert response.status_code == 400

    def test_now_before_data_400(self, client, table_id):
        response = client.get(f"/api/v1/tables/{table_id}/report",
                              params={"now": "2020-01-01T00:00:00Z"})
        assert response.status_code == 400

    def test_degraded_services_reflected_inside_report(self, imported_store):
        # no fixture directory at all: both external groups degrade, the
        # request itself still succeeds
        from tablevet.service import ServiceConfig
        store, table_id = imported_store
        config = ServiceConfig(store_path=str(store.root), offline=True,
                               fixtures_dir=None)
        app = create_app(config)
        with TestClient(app) as degraded_client:
            response = degraded_client.get(
                f"/api/v1/tables/{table_id}/report",
                params={"now": REPORT_NOW_RAW})
        assert response.status_code == 200
        groups = {g["name"]: g["state"]
                  for g in response.json()["facets"]["thoroughness"]["groups"]}
        assert groups["Commonly Searched for Alternatives"] == "unavailable"
        trust_groups = {g["name"]: g["state"]
                        for g in response.json()["facets"]["trustworthiness"]["groups"]}
        assert trust_groups["Task Author"] == "unverified"

    def test_tables_untouched_by_adjustments(self, client, table_id,
                                             imported_store):
        store, _ = imported_store
        table_doc = (store.root / "tables" / f"{table_id}.json").read_bytes()
        client.post(
            "/api/v1/consumer/adjustments",
            json={"action": "add_trusted", "domain": "example.org",
                  "table_id": table_id, "now": REPORT_NOW_RAW},
            headers={"X-Consumer-Id": "consumer-pure"})
        assert (store.root / "tables" / f"{table_id}.json").read_bytes() \
            == table_doc
