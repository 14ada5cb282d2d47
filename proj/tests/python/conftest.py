import json
import os
import pathlib

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]
SCHEMAS = ROOT / "schemas"


@pytest.fixture(scope="session")
def schema():
    jsonschema = pytest.importorskip("jsonschema")
    referencing = pytest.importorskip("referencing")
    docs = {p.name: json.loads(p.read_text()) for p in SCHEMAS.glob("*.schema.json")}
    registry = referencing.Registry().with_resources(
        (doc["$id"], referencing.Resource.from_contents(doc)) for doc in docs.values()
    )

    def check(instance, name):
        validator = jsonschema.Draft202012Validator(docs[name], registry=registry)
        validator.validate(instance)

    return check


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("LPRC_CLI")
    if not path or not pathlib.Path(path).exists():
        pytest.skip("LPRC_CLI not set")
    return path
