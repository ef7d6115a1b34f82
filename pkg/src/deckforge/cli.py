"""Command line entry points: serve, repl, train-parser, simulate, render."""

from __future__ import annotations

import json
import os
import sys

import click

from .deck_model import parse_deck
from .docgen import render_html
from .errors import DeckforgeError
from .parser import evaluate_tagger, load_corpus_file, save_model, train_tagger, train_test_corpora
from .sim import ExperimentConfig, run_experiment, write_curves_csv
from .workspace import ENV_WORKSPACE, Workspace


def _workspace_option(func):
    return click.option(
        "--workspace",
        "workspace_dir",
        default=lambda: os.environ.get(ENV_WORKSPACE, "./workspace"),
        show_default="./workspace or $DECKFORGE_WORKSPACE",
        help="Directory holding the knowledge base, decks, and datasets.",
    )(func)


@click.group()
def main() -> None:
    """Conversational report generation over financial time series."""


@main.command()
@_workspace_option
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(workspace_dir: str, host: str, port: int) -> None:
    """Start the HTTP API."""
    import uvicorn

    from .service import create_app

    app = create_app(Workspace(workspace_dir))
    uvicorn.run(app, host=host, port=port)


@main.command()
@_workspace_option
def repl(workspace_dir: str) -> None:
    """Interactive chat loop against a local workspace."""
    from .service import ChatService

    service = ChatService(Workspace(workspace_dir))
    session = service.create_session()
    click.echo("Type a command, or 'quit' to exit.")
    while True:
        try:
            text = input("> ")
        except EOFError:
            break
        if text.strip().lower() in {"quit", "exit"}:
            break
        turn = service.handle_message(session.session_id, text)
        click.echo(turn.reply_text)


@main.command("train-parser")
@click.option("--corpus", "corpus_path", default=None, help="token/LABEL corpus file; synthetic when omitted.")
@click.option("--out", "out_path", required=True, help="Where to write the trained model JSON.")
@click.option("--epochs", default=50, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
def train_parser(corpus_path: str | None, out_path: str, epochs: int, seed: int) -> None:
    """Train the command tagger and report held-out F1 when possible."""
    if corpus_path:
        train = load_corpus_file(corpus_path)
        test = None
    else:
        train, test = train_test_corpora(seed=seed)
    model = train_tagger(train, epochs=epochs, seed=seed)
    save_model(model, out_path)
    if test is not None:
        f1, precision, recall = evaluate_tagger(model, test)
        click.echo(f"held-out macro F1={f1:.3f} precision={precision:.3f} recall={recall:.3f}")
    click.echo(f"model written to {out_path}")


@main.command()
@click.option("--alpha", default=0.6, show_default=True, type=float)
@click.option("--vocab-size", default=50, show_default=True, type=int)
@click.option("--pdf-shape", default="inv_n", show_default=True)
@click.option("--repetitions", default=10, show_default=True, type=int)
@click.option("--slides-per-phase", default=3000, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", "out_path", default="curves.csv", show_default=True)
def simulate(alpha, vocab_size, pdf_shape, repetitions, slides_per_phase, seed, out_path) -> None:
    """Run one adaptive-vs-permanent knowledge base experiment."""
    try:
        config = ExperimentConfig(
            alpha=alpha,
            vocab_size=vocab_size,
            pdf_shape=pdf_shape,
            repetitions=repetitions,
            slides_per_phase=slides_per_phase,
            seed=seed,
        )
    except DeckforgeError as exc:
        raise click.ClickException(str(exc)) from exc
    result = run_experiment(config)
    write_curves_csv(result, out_path)
    for variant in sorted(result.eval_rep_means):
        click.echo(f"{variant} mean evaluation score: {result.mean_eval_score(variant):.3f}")
    click.echo(f"curves written to {out_path}")


@main.command()
@click.option("--deck", "deck_path", required=True, help="Deck JSON file to render.")
@click.option("--html", "html_path", default=None, help="Output HTML path; stdout when omitted.")
def render(deck_path: str, html_path: str | None) -> None:
    """Render a stored deck to a self-contained HTML document."""
    with open(deck_path, encoding="utf-8") as fh:
        deck = parse_deck(fh.read())
    html = render_html(deck)
    if html_path:
        with open(html_path, "w", encoding="utf-8") as fh:
            fh.write(html)
        click.echo(f"wrote {html_path}")
    else:
        sys.stdout.write(html)


if __name__ == "__main__":
    main()
