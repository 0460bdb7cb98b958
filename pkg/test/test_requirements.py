import re

from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

# Pinned for typer, which imports it
INDIRECT = {'click'}


def requirement_names():
    lines = (ROOT / 'requirements.txt').read_text().splitlines()
    return [re.split('[=<>~!]', line)[0].strip() for line in lines if line.strip() and not line.startswith('#')]


def imported_modules():
    sources = list((ROOT / 'stablecoin_redemption_controller').rglob('*.py')) + list((ROOT / 'test').glob('*.py'))
    modules = set()
    for source in sources:
        for match in re.finditer(r'^\s*(?:from|import) (\w+)', source.read_text(), re.MULTILINE):
            modules.add(match.group(1))
    return modules


def test_every_requirement_is_imported():
    modules = imported_modules()
    unused = [name for name in requirement_names() if name not in INDIRECT and name.replace('-', '_') not in modules]
    assert unused == []
