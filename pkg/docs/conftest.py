"""
Runs the example scripts below ``docs/examples/code`` and compares their
output with the ``*.out`` file next to them. Scripts without an ``*.out``
file are skipped.

"""
import difflib
import subprocess
import sys

import pytest


def pytest_collect_file(file_path, parent):
    if file_path.suffix == '.py' and file_path.parent.name == 'code':
        if file_path.with_suffix('.out').exists():
            return ExampleFile.from_parent(parent, path=file_path)
    return None


class ExampleFile(pytest.File):
    def collect(self):
        yield ExampleItem.from_parent(self, name=self.path.stem)


class ExampleItem(pytest.Item):
    """Executes an example script in a separate process."""

    def runtest(self):
        expected = self.path.with_suffix('.out').read_text()
        output = subprocess.check_output(
            [sys.executable, str(self.path)], stderr=subprocess.STDOUT,
            universal_newlines=True,
        )
        if output != expected:
            raise ValueError(expected, output)

    def repr_failure(self, excinfo):
        if isinstance(excinfo.value, ValueError):
            expected, output = excinfo.value.args
            diff = difflib.unified_diff(
                expected.splitlines(), output.splitlines(),
                'expected', 'output', lineterm='',
            )
            return '\n'.join(diff) + f'\n{self.path}: Unexpected output'
        if isinstance(excinfo.value, subprocess.CalledProcessError):
            return (
                f'{self.path}: Example failed '
                f'(exitcode={excinfo.value.returncode})\n'
                f'{excinfo.value.output}'
            )
        return super().repr_failure(excinfo)

    def reportinfo(self):
        return self.path, None, f'{self.path.stem} example'
