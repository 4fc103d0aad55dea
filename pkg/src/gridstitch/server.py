"""JSON-over-HTTP service in front of the engine.

Endpoints mirror the library operations one-for-one; nothing is reachable
over HTTP that the library cannot do. Mutations carry the client's
last-seen revision and conflict with 409; rejected edits return 422 with
the machine-readable reason. Long decompose jobs run on a small worker
pool and are polled via /jobs.
"""

from __future__ import annotations

import json
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from . import document, layout, mesh
from .config import PatternConfig
from .cover import ModuleSupply, solve_cover
from .errors import Infeasible, PatternError, UnknownRef
from .pattern import canonical_view
from .store import PatternStore


class ServiceState:
    def __init__(self, root):
        self.store = PatternStore(root)
        self.jobs: dict[str, dict] = {}
        self.jobs_lock = threading.Lock()
        self.pool = ThreadPoolExecutor(max_workers=2)

    def submit_job(self, fn) -> str:
        job_id = uuid.uuid4().hex[:12]
        with self.jobs_lock:
            self.jobs[job_id] = {"status": "running", "result": None, "error": None}

        def run():
            try:
                result = fn()
                with self.jobs_lock:
                    self.jobs[job_id].update(status="done", result=result)
            except Infeasible as exc:
                with self.jobs_lock:
                    self.jobs[job_id].update(status="infeasible", error=str(exc))
            except Exception as exc:  # noqa: BLE001 - job boundary
                with self.jobs_lock:
                    self.jobs[job_id].update(status="error", error=str(exc))

        self.pool.submit(run)
        return job_id


class Handler(BaseHTTPRequestHandler):
    state: ServiceState = None
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):  # quiet by default
        pass

    # -- plumbing -----------------------------------------------------------

    def _send(self, code: int, payload, content_type="application/json"):
        if isinstance(payload, (dict, list)):
            body = (json.dumps(payload, sort_keys=True) + "\n").encode()
        elif isinstance(payload, str):
            body = payload.encode()
        else:
            body = payload
        self.send_response(code)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _body(self):
        length = int(self.headers.get("Content-Length") or 0)
        if not length:
            return {}
        raw = self.rfile.read(length)
        try:
            return json.loads(raw)
        except json.JSONDecodeError:
            raise ValueError("request body is not valid JSON") from None

    def _error(self, code: int, reason: str, detail: str = ""):
        self._send(code, {"error": reason, "detail": detail})

    # -- routing --------------------------------------------------------------

    def do_OPTIONS(self):  # CORS preflight for the editor
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        try:
            self._route("GET")
        except PatternError as exc:
            self._error(400, exc.reason, str(exc))
        except Exception as exc:  # noqa: BLE001
            self._error(500, "InternalError", str(exc))

    def do_POST(self):
        try:
            self._route("POST")
        except ValueError as exc:
            self._error(400, "InvalidInput", str(exc))
        except PatternError as exc:
            self._error(400, exc.reason, str(exc))
        except Exception as exc:  # noqa: BLE001
            self._error(500, "InternalError", str(exc))

    def do_PUT(self):
        self.do_POST()

    def _route(self, method: str):
        url = urlparse(self.path)
        parts = [p for p in url.path.split("/") if p]
        query = {k: v[0] for k, v in parse_qs(url.query).items()}
        store = self.state.store

        if parts == ["templates"] and method == "GET":
            out = []
            for name in store.template_names():
                out.append({"id": name, "name": name})
            return self._send(200, out)
        if len(parts) == 2 and parts[0] == "templates" and method == "GET":
            pattern = store.template(parts[1])
            return self._send(200, {
                "doc": document.to_doc(pattern),
                "view": canonical_view(pattern),
            })

        if parts == ["patterns"] and method == "GET":
            return self._send(200, {"patterns": store.ids()})
        if parts == ["patterns"] and method == "POST":
            return self._create_pattern()

        if len(parts) >= 2 and parts[0] == "patterns":
            pattern_id = parts[1]
            rest = parts[2:]
            if not store.exists(pattern_id):
                return self._error(404, "NotFound", f"no pattern {pattern_id}")
            if not rest and method == "GET":
                pattern = store.load(pattern_id)
                return self._send(200, {
                    "id": pattern_id,
                    "doc": document.to_doc(pattern),
                    "view": canonical_view(pattern),
                })
            if rest == ["file"] and method == "GET":
                pattern = store.load(pattern_id)
                return self._send(200, document.dumps(pattern),
                                  content_type="application/json")
            if not rest and method in ("PUT", "POST"):
                return self._upload_pattern(pattern_id)
            if rest == ["edits"] and method == "POST":
                return self._apply_edit(pattern_id)
            if rest == ["undo"] and method == "POST":
                return self._undo(pattern_id)
            if rest == ["decompose"] and method == "POST":
                return self._decompose(pattern_id)
            if rest == ["export", "svg"] and method == "GET":
                return self._export_svg(pattern_id, query)
            if rest == ["export", "instructions"] and method == "GET":
                return self._export_instructions(pattern_id, query)
            if rest == ["export", "mesh"] and method == "POST":
                return self._export_mesh(pattern_id)

        if len(parts) == 2 and parts[0] == "jobs" and method == "GET":
            with self.state.jobs_lock:
                job = self.state.jobs.get(parts[1])
            if job is None:
                return self._error(404, "NotFound", "no such job")
            return self._send(200, job)

        return self._error(404, "NotFound", self.path)

    # -- handlers ----------------------------------------------------------------

    def _create_pattern(self):
        body = self._body()
        store = self.state.store
        if "from_template" in body:
            pattern = store.instantiate_template(
                body["from_template"], bool(body.get("phase1_only"))
            )
        else:
            config = PatternConfig.from_dict(body.get("config", {}))
            from .pattern import new_pattern

            pattern = new_pattern(config)
        pattern_id = store.new_id()
        with store.lock(pattern_id):
            store.save(pattern_id, pattern)
        self._send(201, {
            "id": pattern_id,
            "revision": pattern.revision,
            "view": canonical_view(pattern),
        })

    def _upload_pattern(self, pattern_id):
        body = self._body()
        doc = body.get("doc", body)
        pattern = document.from_doc(doc)
        store = self.state.store
        with store.lock(pattern_id):
            store.save(pattern_id, pattern)
        self._send(200, {"id": pattern_id, "revision": pattern.revision})

    def _apply_edit(self, pattern_id):
        body = self._body()
        if "op" not in body:
            return self._error(400, "InvalidInput", "missing op")
        store = self.state.store
        with store.lock(pattern_id):
            pattern = store.load(pattern_id)
            if body.get("revision") != pattern.revision:
                return self._send(409, {
                    "error": "RevisionConflict",
                    "server_revision": pattern.revision,
                })
            try:
                result = document.apply_op(pattern, body["op"])
            except PatternError as exc:
                return self._send(422, {
                    "error": exc.reason,
                    "detail": str(exc),
                    "revision": pattern.revision,
                })
            if result is not None and not result.accepted:
                return self._send(422, {
                    "error": result.reason,
                    "detail": result.detail,
                    "revision": pattern.revision,
                })
            store.save(pattern_id, pattern)
            payload = {
                "revision": pattern.revision,
                "result": result.to_dict() if result is not None else None,
            }
        self._send(200, payload)

    def _undo(self, pattern_id):
        body = self._body()
        store = self.state.store
        with store.lock(pattern_id):
            pattern = store.load(pattern_id)
            if body.get("revision") != pattern.revision:
                return self._send(409, {
                    "error": "RevisionConflict",
                    "server_revision": pattern.revision,
                })
            pattern = document.undo(pattern)
            store.save(pattern_id, pattern)
            self._send(200, {
                "revision": pattern.revision,
                "view": canonical_view(pattern),
            })

    def _decompose(self, pattern_id):
        body = self._body()
        store = self.state.store
        pattern = store.load(pattern_id)
        supply = (ModuleSupply.from_dict(body["supply"])
                  if body.get("supply") else None)
        budget = float(body.get("budget_s", 60.0))
        backend = body.get("backend", "auto")

        def work():
            asm = solve_cover(pattern, supply, budget, backend)
            return asm.to_dict()

        if body.get("async"):
            job_id = self.state.submit_job(work)
            return self._send(202, {"job": job_id})
        try:
            result = work()
        except Infeasible as exc:
            return self._error(422, "Infeasible", str(exc))
        if not result["optimal"]:
            return self._send(504, {
                "error": "TimeBudgetExceeded",
                "assembly": result,
            })
        self._send(200, result)

    def _export_svg(self, pattern_id, query):
        pattern = self.state.store.load(pattern_id)
        sheet = float(query.get("sheet_width", 100.0))
        budget = float(query.get("budget_s", 60.0))
        asm = solve_cover(pattern, None, budget)
        lay = layout.pack_layout(asm, pattern, sheet)
        svg = layout.render_svg(lay, pattern.config, revision=pattern.revision)
        self._send(200, svg, content_type="image/svg+xml")

    def _export_instructions(self, pattern_id, query):
        pattern = self.state.store.load(pattern_id)
        budget = float(query.get("budget_s", 60.0))
        asm = solve_cover(pattern, None, budget)
        instr = layout.assembly_instructions(pattern, asm)
        self._send(200, {
            "instructions": instr,
            "markdown": layout.instructions_markdown(instr),
        })

    def _export_mesh(self, pattern_id):
        body = self._body()
        pattern = self.state.store.load(pattern_id)
        offsets = {
            int(k): tuple(v) for k, v in (body.get("offsets") or {}).items()
        }
        bundle = mesh.build_bundle(pattern, offsets,
                                   float(body.get("spacing", 1.0)))
        objs = {str(pid): mesh.mesh_obj(m) for pid, m in bundle.meshes.items()}
        self._send(200, {
            "objs": objs,
            "sidecar": mesh.sidecar_text(bundle),
            "threads": len(bundle.threads),
        })


def make_server(root, host="127.0.0.1", port=0) -> ThreadingHTTPServer:
    state = ServiceState(root)
    handler = type("BoundHandler", (Handler,), {"state": state})
    return ThreadingHTTPServer((host, port), handler)


def serve(root, host="127.0.0.1", port=8777):
    server = make_server(root, host, port)
    print(f"serving patterns from {root} at http://{host}:{server.server_address[1]}",
          flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
