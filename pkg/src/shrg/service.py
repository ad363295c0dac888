"""Review workbench service: serves corpus items, records labels, previews
and stores rule-based rebuilds, and persists an append-only event log.

State is event-sourced: replaying the log over the loaded corpus
reconstructs item states exactly.  Mutations are serialized through one
writer lock and flushed to the log before the response is sent; reads are
concurrent.
"""

from __future__ import annotations

import json
import threading
from dataclasses import replace
from datetime import datetime, timezone
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from .compose import ComposeError, compose
from .corpus import (
    LABELS,
    SentenceRecord,
    annotators,
    corpus_report,
    iaa_report,
    provenance_report,
    record_to_json,
)
from .fragments import FragmentError
from .graphs import GraphError, graph_to_json
from .rules import (
    RuleError,
    RuleInventory,
    cfg_signature,
    derivation_from_json,
    derivation_to_json,
    derivation_yield,
    rule_to_json,
)
from .trees import serialize_tree

PAGE_SIZE = 50


class ServiceError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class ReviewState:
    def __init__(self, records, inventory: RuleInventory, log_path):
        self.records: dict[str, SentenceRecord] = {}
        self.order: list[str] = []
        for rec in records:
            if rec.id in self.records:
                raise ServiceError(500, f"duplicate record id {rec.id!r}")
            self.records[rec.id] = rec
            self.order.append(rec.id)
        self.inventory = inventory
        self.log_path = log_path
        self.rebuilt: set[str] = set()
        self.seq = 0
        self.lock = threading.Lock()
        self._log_file = None
        self._replay()

    def _replay(self):
        try:
            with open(self.log_path, encoding="utf-8") as f:
                for line in f:
                    if line.strip():
                        event = json.loads(line)
                        self._apply(event)
                        self.seq = max(self.seq, event["seq"])
        except FileNotFoundError:
            pass

    def _apply(self, event: dict):
        action = event["action"]
        item = event["item"]
        rec = self.records.get(item)
        if rec is None:
            raise ServiceError(404, f"unknown item {item!r}")
        if action in ("label", "relabel"):
            labels = dict(rec.labels)
            labels[event["annotator"]] = event["payload"]["label"]
            self.records[item] = replace(rec, labels=labels)
        elif action == "rebuild":
            derivation = derivation_from_json(event["payload"]["derivation"])
            _, graph = compose(derivation, self.inventory)
            self.records[item] = replace(
                rec, graph=graph, derivation=derivation, provenance="composed"
            )
            self.rebuilt.add(item)
        elif action == "revise":
            self.rebuilt.add(item)
        else:
            raise ServiceError(400, f"unknown action {action!r}")

    def mutate(self, annotator: str, item: str, action: str, payload: dict) -> dict:
        """Assign a sequence number, apply, and persist before returning."""
        with self.lock:
            event = {
                "seq": self.seq + 1,
                "ts": _now(),
                "annotator": annotator,
                "item": item,
                "action": action,
                "payload": payload,
            }
            self._apply(event)
            self.seq += 1
            if self._log_file is None:
                self._log_file = open(self.log_path, "a", encoding="utf-8")
            self._log_file.write(json.dumps(event, ensure_ascii=False) + "\n")
            self._log_file.flush()
            return event

    # --- views ---

    def status_of(self, rec: SentenceRecord) -> str:
        acc = sum(1 for v in rec.labels.values() if v == "accept")
        rej = sum(1 for v in rec.labels.values() if v == "reject")
        if acc > rej:
            return "accepted"
        if rej > acc:
            return "rejected"
        if rec.labels and all(v == "abandon" for v in rec.labels.values()):
            return "abandoned"
        return "pending"

    def summary(self, rec: SentenceRecord) -> dict:
        return {
            "id": rec.id,
            "source": rec.source,
            "sentence": rec.sentence,
            "status": self.status_of(rec),
            "rebuilt": rec.id in self.rebuilt,
            "n_labels": len(rec.labels),
            "provenance": rec.provenance,
        }

    def item_view(self, rec: SentenceRecord) -> dict:
        view = record_to_json(rec)
        view["status"] = self.status_of(rec)
        view["rebuilt"] = rec.id in self.rebuilt
        return view

    def close(self):
        if self._log_file is not None:
            self._log_file.close()
            self._log_file = None


def _handle(state: ReviewState, method: str, path: str, query: dict, body: dict | None):
    parts = [p for p in path.split("/") if p]

    if method == "GET" and parts == ["items"]:
        items = [state.records[rid] for rid in state.order]
        status = query.get("status")
        source = query.get("source")
        summaries = [state.summary(rec) for rec in items]
        if status == "rebuilt":
            summaries = [s for s in summaries if s["rebuilt"]]
        elif status:
            summaries = [s for s in summaries if s["status"] == status]
        if source:
            summaries = [s for s in summaries if s["source"] == source]
        page = int(query.get("page", "0") or 0)
        pages = max(1, -(-len(summaries) // PAGE_SIZE))
        window = summaries[page * PAGE_SIZE : (page + 1) * PAGE_SIZE]
        return 200, {"items": window, "page": page, "pages": pages, "total": len(summaries)}

    if method == "GET" and len(parts) == 2 and parts[0] == "items":
        rec = state.records.get(parts[1])
        if rec is None:
            raise ServiceError(404, f"unknown item {parts[1]!r}")
        return 200, state.item_view(rec)

    if method == "POST" and len(parts) == 3 and parts[0] == "items" and parts[2] == "label":
        rec = state.records.get(parts[1])
        if rec is None:
            raise ServiceError(404, f"unknown item {parts[1]!r}")
        annotator = (body or {}).get("annotator")
        label = (body or {}).get("label")
        if not annotator or label not in LABELS:
            raise ServiceError(422, "label requires an annotator and a valid label")
        already = annotator in rec.labels
        if already and not (body or {}).get("force"):
            raise ServiceError(
                409, f"{annotator!r} already labeled {rec.id!r}; resubmit with force"
            )
        action = "relabel" if already else "label"
        event = state.mutate(annotator, rec.id, action, {"label": label})
        return 200, {"ok": True, "seq": event["seq"], "item": state.summary(state.records[rec.id])}

    if method == "POST" and parts == ["preview", "compose"]:
        derivation = _parse_derivation(body)
        tree, graph = _compose_checked(state, derivation, None)
        return 200, {"tree": serialize_tree(tree), "graph": graph_to_json(graph)}

    if method == "POST" and len(parts) == 3 and parts[0] == "items" and parts[2] == "rebuild":
        rec = state.records.get(parts[1])
        if rec is None:
            raise ServiceError(404, f"unknown item {parts[1]!r}")
        derivation = _parse_derivation(body)
        tree, graph = _compose_checked(state, derivation, rec)
        annotator = (body or {}).get("annotator", "anonymous")
        state.mutate(
            annotator, rec.id, "rebuild", {"derivation": derivation_to_json(derivation)}
        )
        stored = state.records[rec.id]
        return 200, {
            "ok": True,
            "tree": serialize_tree(tree),
            "graph": graph_to_json(stored.graph),
        }

    if method == "GET" and parts == ["rules"]:
        signature = query.get("signature")
        needle = (query.get("q") or "").lower()
        rows = []
        for rule in sorted(state.inventory, key=lambda r: (-r.count, r.id)):
            sig = cfg_signature(rule, state.inventory.mode)
            if signature and sig != signature:
                continue
            if needle and needle not in sig.lower() and needle not in rule.id.lower():
                continue
            rows.append({"signature": sig, "rule": rule_to_json(rule)})
        return 200, {"rules": rows[:200], "total": len(rows)}

    if method == "GET" and parts == ["reports", "iaa"]:
        records = [state.records[rid] for rid in state.order]
        annos = annotators(records)
        groups = ([tuple(annos)] if len(annos) >= 3 else []) + [
            (annos[i], annos[j])
            for i in range(len(annos))
            for j in range(i + 1, len(annos))
        ]
        return 200, iaa_report(records, groups)

    if method == "GET" and parts == ["reports", "corpus"]:
        records = [state.records[rid] for rid in state.order]
        return 200, {
            "labels": corpus_report(records).to_json(),
            "provenance": provenance_report(records),
        }

    raise ServiceError(404, f"no route for {method} {path}")


def _parse_derivation(body):
    obj = (body or {}).get("derivation")
    if obj is None:
        raise ServiceError(422, "request body must carry a derivation")
    try:
        return derivation_from_json(obj)
    except (KeyError, TypeError) as exc:
        raise ServiceError(422, f"malformed derivation: {exc}") from exc


def _compose_checked(state: ReviewState, derivation, rec):
    try:
        tree, graph = compose(derivation, state.inventory)
        if rec is not None:
            tokens = derivation_yield(derivation, state.inventory)
            if tokens != list(rec.tokens):
                raise ServiceError(
                    422,
                    f"derivation yields {' '.join(tokens)!r}, item is {rec.sentence!r}",
                )
        return tree, graph
    except (RuleError, ComposeError, FragmentError, GraphError) as exc:
        raise ServiceError(422, str(exc)) from exc


class _Handler(BaseHTTPRequestHandler):
    state: ReviewState = None  # set by make_server

    def _run(self, method: str):
        parsed = urlparse(self.path)
        query = {k: v[0] for k, v in parse_qs(parsed.query).items()}
        body = None
        if method == "POST":
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b""
            if raw:
                try:
                    body = json.loads(raw.decode("utf-8"))
                except json.JSONDecodeError as exc:
                    return self._send(400, {"error": f"bad JSON body: {exc}"})
        try:
            status, payload = _handle(self.state, method, parsed.path, query, body)
        except ServiceError as exc:
            return self._send(exc.status, {"error": str(exc)})
        self._send(status, payload)

    def _send(self, status: int, payload: dict):
        data = json.dumps(payload, ensure_ascii=False, sort_keys=True).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(data)

    def do_GET(self):
        self._run("GET")

    def do_POST(self):
        self._run("POST")

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()

    def log_message(self, format, *args):  # quiet; diagnostics go to stderr on demand
        pass


def make_server(records, inventory, log_path, host="127.0.0.1", port=0):
    state = ReviewState(records, inventory, log_path)
    handler = type("BoundHandler", (_Handler,), {"state": state})
    server = ThreadingHTTPServer((host, port), handler)
    return server, state


def run_service(records, inventory, log_path, host, port):
    server, state = make_server(records, inventory, log_path, host, port)
    import sys

    print(f"serving on http://{server.server_address[0]}:{server.server_address[1]}",
          file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        state.close()
        server.server_close()
