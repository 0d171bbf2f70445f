import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        out = Path(self.get_ext_fullpath(ext.name)).resolve().parent
        build = Path(self.build_temp).resolve()
        build.mkdir(parents=True, exist_ok=True)
        src = Path(__file__).resolve().parent
        subprocess.run(
            ["cmake", "-S", str(src), "-B", str(build),
             "-DCMAKE_BUILD_TYPE=Release",
             f"-DPython3_EXECUTABLE={sys.executable}"],
            check=True)
        subprocess.run(
            ["cmake", "--build", str(build), "--target", "_core"],
            check=True)
        out.mkdir(parents=True, exist_ok=True)
        for so in build.glob("_core*"):
            if so.suffix in {".so", ".pyd"}:
                self.copy_file(so, out / so.name)


setup(ext_modules=[CMakeExtension("clrlab._core")],
      cmdclass={"build_ext": CMakeBuild})
