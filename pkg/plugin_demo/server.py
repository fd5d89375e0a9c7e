"""Reference external plugin: lead-K summarizer and length-ratio measure.

Runs one plugin per process behind the workbench wire contract:

    GET  /health     -> {"status": "ok"}
    GET  /metadata   -> manifest as JSON
    POST /summarize  -> {"summaries": [...]}       (lead_k only)
    POST /evaluate   -> {"scores": [{...}]}        (length_ratio only)

Deliberately tiny: the stdlib HTTP server plus the core's own text
splitting, so the protocol rather than the model is under test.

    python3 server.py --plugin lead_k --port 7801
    python3 server.py --plugin length_ratio --port 7802
"""

from __future__ import annotations

import argparse
import json
import math
from http.server import BaseHTTPRequestHandler, HTTPServer
from pathlib import Path

import yaml

from sumlab.textcore import EmptyInput, split_sentences, tokenize

HERE = Path(__file__).parent


class BadRequest(ValueError):
    pass


class ValidationError(ValueError):
    pass


def lead_k_summary(text: str, ratio: float) -> str:
    """First ceil(ratio * N) sentences, using the core's splitter."""
    try:
        sentences = split_sentences(text)
    except EmptyInput:
        raise BadRequest("text must be non-empty")
    k = max(1, math.ceil(ratio * len(sentences)))
    spans = [s.char_span for s in sentences[:k]]
    return " ".join(text[a:b] for a, b in spans)


def length_ratio_score(candidate: str, references: list[str]) -> float:
    """min(1, candidate token count / reference token count); 0.0 for an
    empty candidate, measured against the first reference."""
    cand = len(tokenize(candidate))
    if cand == 0:
        return 0.0
    ref = len(tokenize(references[0])) if references else 0
    if ref == 0:
        return 0.0
    return min(1.0, cand / ref)


def handle_summarize(body: dict) -> dict:
    batch = body.get("batch")
    if not isinstance(batch, list):
        raise BadRequest("body must contain a batch list")
    summaries = []
    for i, item in enumerate(batch):
        if not isinstance(item, dict) or not isinstance(item.get("text"), str):
            raise BadRequest(f"batch[{i}]: text must be a string")
        ratio = item.get("ratio")
        if not isinstance(ratio, (int, float)) or isinstance(ratio, bool) or not 0 < ratio <= 1:
            raise ValidationError(f"batch[{i}]: ratio must be in (0, 1]")
        if item.get("arguments"):
            raise ValidationError(f"batch[{i}]: lead_k accepts no arguments")
        summaries.append(lead_k_summary(item["text"], float(ratio)))
    return {"summaries": summaries}


def handle_evaluate(body: dict) -> dict:
    batch = body.get("batch")
    if not isinstance(batch, list):
        raise BadRequest("body must contain a batch list")
    if body.get("arguments"):
        raise ValidationError("length_ratio accepts no arguments")
    scores = []
    for i, item in enumerate(batch):
        if not isinstance(item, dict) or not isinstance(item.get("candidate"), str):
            raise BadRequest(f"batch[{i}]: candidate must be a string")
        references = item.get("references")
        if not isinstance(references, list) or not all(isinstance(r, str) for r in references):
            raise BadRequest(f"batch[{i}]: references must be a string list")
        scores.append({"length_ratio": length_ratio_score(item["candidate"], references)})
    return {"scores": scores}


def make_handler(plugin: str, manifest: dict):
    post_route = "/summarize" if plugin == "lead_k" else "/evaluate"
    post_handler = handle_summarize if plugin == "lead_k" else handle_evaluate

    class Handler(BaseHTTPRequestHandler):
        def _send(self, status: int, payload: dict) -> None:
            blob = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(blob)))
            self.end_headers()
            self.wfile.write(blob)

        def do_GET(self):
            if self.path == "/health":
                self._send(200, {"status": "ok"})
            elif self.path == "/metadata":
                self._send(200, manifest)
            else:
                self._send(404, {"error": f"no route {self.path}"})

        def do_POST(self):
            if self.path != post_route:
                self._send(404, {"error": f"no route {self.path}"})
                return
            try:
                length = int(self.headers.get("Content-Length", 0))
                body = json.loads(self.rfile.read(length).decode("utf-8"))
                if not isinstance(body, dict):
                    raise BadRequest("body must be a JSON object")
                self._send(200, post_handler(body))
            except ValidationError as exc:
                self._send(422, {"errors": [str(exc)]})
            except (BadRequest, json.JSONDecodeError, UnicodeDecodeError) as exc:
                self._send(400, {"error": str(exc)})
            except Exception as exc:
                self._send(500, {"error": f"{type(exc).__name__}: {exc}"})

        def log_message(self, fmt, *args):
            pass  # keep test output clean

    return Handler


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--plugin", choices=["lead_k", "length_ratio"], required=True)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=7801)
    args = parser.parse_args()

    manifest = yaml.safe_load((HERE / f"{args.plugin}.yaml").read_text("utf-8"))
    server = HTTPServer((args.host, args.port), make_handler(args.plugin, manifest))
    print(f"serving {args.plugin} on {args.host}:{server.server_address[1]}", flush=True)
    server.serve_forever()


if __name__ == "__main__":
    main()
