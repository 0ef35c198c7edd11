import functools
import os
import tempfile
from pathlib import Path
from typing import Optional, Type, TypeVar

import click
import orjson
from pydantic import BaseModel, ValidationError

from app.core.exceptions import AlbertError
from app.models.albert import Frame, Gamma
from app.models.quadspace import Vector
from app.models.scalars import RingDescriptor
from app.schemas.albert import ElementFile, FrameFile
from app.schemas.quadspace import VectorFile

Schema = TypeVar("Schema", bound=BaseModel)


class CommandError(click.ClickException):
    """One-line diagnostic on stderr and exit status 2."""

    exit_code = 2


def handle_errors(command):
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except AlbertError as exc:
            raise CommandError(f"{type(exc).__name__}: {exc}")
    return wrapper


def dumps(model: BaseModel) -> bytes:
    return orjson.dumps(model.model_dump(mode="json"), option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2)


def write_atomic(path: str, data: bytes) -> None:
    """Write via a temp file in the target directory, then rename over `path`."""
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_json(path: str) -> dict:
    try:
        return orjson.loads(Path(path).read_bytes())
    except OSError as exc:
        raise CommandError(f"cannot read {path}: {exc}")
    except orjson.JSONDecodeError as exc:
        raise CommandError(f"{path} is not valid JSON: {exc}")


def load(path: str, schema: Type[Schema]) -> Schema:
    try:
        return schema.model_validate(read_json(path))
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise CommandError(f"{path}: {where}: {first['msg']}")


def save(path: str, model: BaseModel, schema: Type[Schema]) -> None:
    """Serialize, check that the bytes re-parse, then write atomically."""
    data = dumps(model)
    schema.model_validate(orjson.loads(data)).to_model()
    write_atomic(path, data)


def load_vector(path: str) -> Vector:
    data = read_json(path)
    schema = ElementFile if data.get("object") == "albert_element" else VectorFile
    try:
        return schema.model_validate(data).to_model()
    except ValidationError as exc:
        raise CommandError(f"{path}: {exc.errors()[0]['msg']}")


def load_frame(path: Optional[str], ring: RingDescriptor) -> Frame:
    if path is None:
        return Frame.distinguished(ring)
    return load(path, FrameFile).to_model()


def parse_ring(text: str) -> RingDescriptor:
    try:
        return RingDescriptor.parse(text)
    except AlbertError as exc:
        raise click.BadParameter(str(exc))


def parse_gamma(ring: RingDescriptor, text: Optional[str]) -> Gamma:
    return Gamma.unit(ring) if not text else Gamma.parse(ring, text)


ring_option = click.option("--ring", default="Q", show_default=True, help='Scalar ring: "Fp:<p>", "Q" or "Z".')
gamma_option = click.option("--gamma", default=None, help="Comma separated g1,g2,g3 (default 1,1,1).")
out_option = click.option("--out", "out", required=True, type=click.Path(dir_okay=False), help="Output file.")
