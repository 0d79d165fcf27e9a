"""Newline-delimited JSON protocol server and the docmap-serve CLI.

Each connection carries one request object per line and receives one
response line per request, in order. Sessions are addressed by token, so a
client may reconnect and continue, and several sessions can share a
connection or spread across many.
"""

from __future__ import annotations

import argparse
import json
import socketserver
import sys
import threading
from pathlib import Path

from .adapters import EngineRegistry, LocalEngineAdapter, ReplayFileAdapter
from .clustering import ClusterConfig
from .errors import BadRequestError, ServiceError
from .indexing import AnalysisConfig, build_index, default_stopwords, load_corpus, load_stopwords
from .mapgrid import GridSpec, bundle_to_wire
from .service import PresentationService

DEFAULT_PORT = 8765


def _ok(body) -> dict:
    return {"ok": True, "body": body}


def _err(code: str, msg: str) -> dict:
    return {"ok": False, "error": {"code": code, "msg": msg}}


def handle_request(service: PresentationService, request: dict) -> dict:
    """Dispatch one decoded request object to the service."""
    op = request.get("op")
    try:
        if op == "open_session":
            token = service.open_session()
            engines = [
                {"id": desc.engine_id, "name": desc.display_name, "kind": desc.kind.value}
                for desc in service.registry.list_engines()
            ]
            return _ok({"session": token, "engines": engines})

        session = request.get("session")
        if not isinstance(session, str):
            raise BadRequestError("missing or non-string 'session' field")

        if op == "search":
            engine = _require_str(request, "engine")
            query = _require_str(request, "query")
            bundle = service.handle_search(session, engine, query)
            return _ok(bundle_to_wire(bundle))
        if op == "get_document":
            doc = service.get_document(session, _require_str(request, "doc"))
            return _ok({"id": doc.id, "title": doc.title, "body": doc.body})
        if op == "toggle_press":
            pressed = service.toggle_press(session, _require_str(request, "doc"))
            return _ok({"pressed": pressed})
        if op == "export":
            run = service.export_session(session)
            return _ok(
                {"query_id": run.query_id, "order": list(run.doc_ids), "run": run.run_text()}
            )
        if op == "close":
            service.close_session(session)
            return _ok({"closed": True})
        raise BadRequestError(f"unknown op {op!r}")
    except ServiceError as exc:
        return _err(exc.code, exc.msg)
    except Exception as exc:  # keep the connection alive on unexpected failures
        return _err("internal", f"{type(exc).__name__}: {exc}")


def _require_str(request: dict, name: str) -> str:
    value = request.get(name)
    if not isinstance(value, str):
        raise BadRequestError(f"missing or non-string {name!r} field")
    return value


class _LineHandler(socketserver.StreamRequestHandler):
    def handle(self) -> None:
        service = self.server.service  # type: ignore[attr-defined]
        for raw in self.rfile:
            line = raw.decode("utf-8", errors="replace").strip()
            if not line:
                continue
            try:
                request = json.loads(line)
                if not isinstance(request, dict):
                    raise BadRequestError("request must be a JSON object")
                response = handle_request(service, request)
            except json.JSONDecodeError as exc:
                response = _err("bad-request", f"invalid JSON: {exc}")
            except BadRequestError as exc:
                response = _err(exc.code, exc.msg)
            payload = json.dumps(response, separators=(",", ":")) + "\n"
            try:
                self.wfile.write(payload.encode("utf-8"))
                self.wfile.flush()
            except (BrokenPipeError, ConnectionResetError):
                return


class DocMapServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, service: PresentationService, host: str = "127.0.0.1", port: int = 0):
        super().__init__((host, port), _LineHandler)
        self.service = service

    @property
    def port(self) -> int:
        return self.server_address[1]

    def serve_in_background(self) -> threading.Thread:
        thread = threading.Thread(target=self.serve_forever, daemon=True)
        thread.start()
        return thread


def build_service(args: argparse.Namespace) -> PresentationService:
    stopwords = load_stopwords(args.stopwords) if args.stopwords else default_stopwords()
    analysis = AnalysisConfig(stopwords=stopwords, stemming=args.stemming == "on")

    adapters = []
    if args.corpus:
        corpus = load_corpus(args.corpus)
        index = build_index(corpus, analysis)
        adapters.append(LocalEngineAdapter("local", "Local tf-idf corpus", index))
    for item in args.replay or []:
        engine_id, _, path = item.partition("=")
        if not engine_id or not path:
            raise SystemExit(f"bad --replay value {item!r}, expected ENGINE_ID=PATH")
        adapters.append(ReplayFileAdapter(engine_id, f"Replay: {Path(path).name}", path))
    if not adapters:
        raise SystemExit("no engines configured: pass --corpus and/or --replay")

    cluster_overrides = {}
    for item in args.cluster_opt or []:
        key, _, value = item.partition("=")
        if key not in ClusterConfig.CONFIG_KEYS:
            raise SystemExit(f"unknown cluster option {key!r}")
        cluster_overrides[key] = value
    cluster_overrides.setdefault("cluster.tabs", args.clusters)

    return PresentationService(
        registry=EngineRegistry(adapters),
        grid=GridSpec.parse(args.grid),
        analysis=analysis,
        clusters=ClusterConfig.from_mapping(cluster_overrides),
        session_cap=args.session_cap,
    )


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="docmap-serve",
        description="Serve document-map bundles over a newline-delimited JSON protocol.",
    )
    parser.add_argument("--port", type=int, default=DEFAULT_PORT, help="TCP port (0 = ephemeral)")
    parser.add_argument("--host", default="127.0.0.1", help="bind address")
    parser.add_argument("--corpus", help="corpus file (one JSON object per line)")
    parser.add_argument("--stopwords", help="stopword file (one word per line)")
    parser.add_argument("--grid", default="10x10", help="map grid as RxC")
    parser.add_argument("--clusters", type=int, default=5, help="cluster tabs per map")
    parser.add_argument("--stemming", choices=("on", "off"), default="off")
    parser.add_argument("--session-cap", type=int, default=64)
    parser.add_argument(
        "--replay",
        action="append",
        metavar="ENGINE_ID=PATH",
        help="replay engine serving a canned result file (repeatable)",
    )
    parser.add_argument(
        "--cluster-opt",
        action="append",
        metavar="KEY=VALUE",
        help="clustering option, e.g. cluster.merge_threshold=0.5 (repeatable)",
    )
    return parser


def main(argv: list[str] | None = None) -> None:
    args = make_parser().parse_args(argv)
    service = build_service(args)
    server = DocMapServer(service, host=args.host, port=args.port)
    print(f"docmap-serve listening on {args.host}:{server.port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()


if __name__ == "__main__":
    main()
