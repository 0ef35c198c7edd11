from dotenv import load_dotenv

load_dotenv()

from app.main import cli  # noqa: E402

cli(prog_name="albert")
