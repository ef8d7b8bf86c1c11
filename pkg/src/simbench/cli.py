"""Command-line client for the benchmark service.

Every command talks HTTP to the service layer.  Without ``--server`` the
service app runs in-process behind an ASGI transport, so the CLI works
offline and single-process; with ``--server URL`` the same requests go to
a remote instance started via ``simbench serve`` (dataset paths then
refer to the server's filesystem).

Exit codes: 0 success, 1 runtime failure, 2 configuration or input error.
"""

from __future__ import annotations

import asyncio
import json
import sys
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

import click
import httpx

from .config import RunConfig, load_config
from .errors import ConfigError, SimbenchError
from .rng import derive_seed


class ServiceClient:
    def __init__(self, server: str | None):
        self.server = server

    async def _request_async(self, method: str, path: str, payload: dict | None):
        if self.server:
            async with httpx.AsyncClient(base_url=self.server, timeout=3600.0) as client:
                return await client.request(method, path, json=payload)
        from .service.app import create_app

        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://simbench", timeout=3600.0
        ) as client:
            return await client.request(method, path, json=payload)

    def request(self, method: str, path: str, payload: dict | None = None) -> dict:
        try:
            response = asyncio.run(self._request_async(method, path, payload))
        except httpx.HTTPError as exc:
            raise click.ClickException(f"service unreachable: {exc}")
        if response.status_code >= 500:
            _fail(f"service error: {response.text[:500]}", code=1)
        if response.status_code >= 400:
            detail = response.json().get("detail", response.text[:500])
            _fail(f"request rejected: {detail}", code=2)
        return response.json()


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_config_or_exit(path: str) -> RunConfig:
    try:
        return load_config(path)
    except (ConfigError, SimbenchError) as exc:
        _fail(str(exc), code=2)


@click.group()
def main() -> None:
    """Benchmark similarity metrics and embedding models."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(), help="Run config JSON.")
@click.option("--task", "tasks", multiple=True, help="Restrict to these tasks.")
@click.option("--subject", "subjects", multiple=True, help="Restrict to these subjects.")
@click.option("--seed", type=int, default=None, help="Override the config seed.")
@click.option("--sample", type=int, default=None, help="Sample size applied to every task.")
@click.option("--out", "out_path", type=click.Path(), default=None, help="Report JSON path.")
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table")
@click.option("--jobs", type=int, default=None, help="Worker threads for subject runs.")
@click.option("--server", default=None, help="Remote service URL (default: in-process).")
def run(config_path, tasks, subjects, seed, sample, out_path, fmt, jobs, server) -> None:
    """Run the benchmark and write the report."""
    config = _load_config_or_exit(config_path)
    if tasks:
        config.tasks = list(tasks)
    if subjects:
        config.subjects = list(subjects)
    if seed is not None:
        config.seed = seed
    if sample is not None:
        config.sample_sizes = {task: sample for task in config.tasks}
    if jobs is not None:
        config.jobs = jobs
    client = ServiceClient(server)
    result = client.request("POST", "/benchmark/run", {"config": config.model_dump()})
    report = result["report"]

    destination = out_path or config.output or "report.json"
    rendered = client.request(
        "POST", "/report/render", {"report": report, "format": "json"}
    )["content"]
    Path(destination).write_bytes(rendered.encode("utf-8"))
    sidecar = {
        "written_at": datetime.now(timezone.utc).isoformat(),
        **result.get("meta", {}),
    }
    Path(f"{destination}.run.json").write_text(json.dumps(sidecar, indent=2) + "\n")

    shown = client.request("POST", "/report/render", {"report": report, "format": fmt})
    click.echo(shown["content"], nl=False)
    click.echo(f"report written to {destination}")


@main.command()
@click.option("--in", "in_path", "in_path", required=True, type=click.Path(), help="Input JSONL.")
@click.option("--out", "out_path", required=True, type=click.Path(), help="Output JSONL.")
@click.option("--kind", required=True, help="Perturbation kind.")
@click.option("--p", "proportion", type=float, default=0.15, help="Insert/remove proportion.")
@click.option("--pos", "position", type=float, default=0.0, help="Insert/remove position.")
@click.option("--seed", type=int, default=42)
@click.option("--server", default=None)
def perturb(in_path, out_path, kind, proportion, position, seed, server) -> None:
    """Perturb the `text` field of every JSONL record."""
    source = Path(in_path)
    if not source.is_file():
        _fail(f"input file not found: {in_path}", code=2)
    client = ServiceClient(server)
    lines_out = []
    for lineno, line in enumerate(source.read_text("utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError:
            _fail(f"{in_path}:{lineno}: invalid JSON", code=2)
        if "text" not in record:
            _fail(f"{in_path}:{lineno}: record has no 'text' field", code=2)
        record_seed = derive_seed(seed, str(record.get("id", lineno)), kind)
        response = client.request(
            "POST",
            "/perturb",
            {
                "text": record["text"],
                "kind": kind,
                "proportion": proportion,
                "position": position,
                "seed": record_seed,
            },
        )
        record["text"] = response["text"]
        record["perturbation"] = {
            "kind": kind,
            "proportion": proportion,
            "position": position,
            "seed": record_seed,
        }
        lines_out.append(json.dumps(record, ensure_ascii=False))
    Path(out_path).write_text("\n".join(lines_out) + "\n", "utf-8")
    click.echo(f"wrote {len(lines_out)} records to {out_path}")


@main.group(name="embed-cache")
def embed_cache() -> None:
    """Embedding cache maintenance."""


@embed_cache.command()
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--server", default=None)
def warm(config_path, server) -> None:
    """Embed every dataset text for the configured embedding subjects."""
    config = _load_config_or_exit(config_path)
    client = ServiceClient(server)
    result = client.request("POST", "/embed-cache/warm", {"config": config.model_dump()})
    click.echo(json.dumps(result, indent=2))


@main.group()
def report() -> None:
    """Report inspection."""


@report.command()
@click.argument("report_path", type=click.Path())
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table")
@click.option("--server", default=None)
def show(report_path, fmt, server) -> None:
    """Render a stored report file."""
    path = Path(report_path)
    if not path.is_file():
        _fail(f"report file not found: {report_path}", code=2)
    try:
        document = json.loads(path.read_text("utf-8"))
    except json.JSONDecodeError:
        _fail(f"{report_path}: invalid JSON", code=2)
    client = ServiceClient(server)
    result = client.request("POST", "/report/render", {"report": document, "format": fmt})
    click.echo(result["content"], nl=False)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port) -> None:
    """Start the HTTP service."""
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=host, port=port)


@main.command()
def fixtures() -> None:
    """Print the bundled fixture directory."""
    click.echo(str(resources.files("simbench").joinpath("fixtures")))


if __name__ == "__main__":
    main()
