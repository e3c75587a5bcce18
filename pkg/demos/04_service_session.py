#!/usr/bin/env python3
# Drive the HTTP facade end to end, in process: create a session,
# stream its events, recenter, ask for example sentences, and search.
# Needs the test extra (httpx) for the in-process client; the real
# server runs via `interlangue serve`.
import json
from pathlib import Path

from fastapi.testclient import TestClient

from interlangue.corpus import TokenizerConfig, read_corpus
from interlangue.service import SessionSettings, build_dataset, create_app
from interlangue.space import SolverConfig

HERE = Path(__file__).parent
pairs = list(read_corpus(HERE / "data" / "demo_corpus_en_ja.tsv", "en", "ja"))
dataset = build_dataset([(("en", "ja"), pairs, "provided")], TokenizerConfig())
app = create_app(dataset, SolverConfig(rng_seed=7), SessionSettings())

with TestClient(app) as client:
    created = client.post("/v1/sessions", json={
        "seed": "en:beautiful", "langs": [["en", "ja"]], "max_rounds": 6,
    }).json()
    session_id = created["session_id"]
    print(f"session {session_id}: starts with "
          f"{[w['word'] for w in created['snapshot']['words']]}")

    print("\nstreaming events (server-sent, resumable by seq cursor):")
    with client.stream("GET", f"/v1/sessions/{session_id}/events") as stream:
        for line in stream.iter_lines():
            if line.startswith("data: "):
                event = json.loads(line[len("data: "):])
                print(f"  seq={event['seq']:<3} {event['kind']}")

    print("\nexample sentences for the edge beautiful - kirei:")
    batch = client.get(f"/v1/sessions/{session_id}/examples",
                       params={"n": 3, "u": "en:beautiful", "v": "ja:kirei"}).json()
    for example in batch["examples"]:
        pair = example["pair"]
        print(f"  [{pair['id']}] {pair['source_text']}  /  {pair['target_text']}")

    print("\nsearch-as-you-type:")
    print("  b ->", client.get("/v1/search", params={"q": "b", "lang": "en"}).json())

    response = client.post(f"/v1/sessions/{session_id}/recenter",
                           json={"lang": "ja", "word": "kirei"})
    print(f"\nrecenter on ja:kirei -> {response.status_code} {response.json()}")
