import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import setup
from setuptools.command.build_ext import build_ext
from setuptools.extension import Extension


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source_dir = Path(__file__).parent.resolve()
        build_dir = Path(self.build_temp).resolve() / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)
        out_path = Path(self.get_ext_fullpath(ext.name)).resolve()
        out_path.parent.mkdir(parents=True, exist_ok=True)

        subprocess.run(
            [
                "cmake",
                "-S", str(source_dir),
                "-B", str(build_dir),
                "-DCMAKE_BUILD_TYPE=Release",
                "-DHDLAGENT_BUILD_PYTHON=ON",
                "-DHDLAGENT_BUILD_TESTS=OFF",
                "-DHDLAGENT_BUILD_CLI=OFF",
                f"-Dpybind11_DIR={self._pybind11_dir()}",
                f"-DPYTHON_EXECUTABLE={sys.executable}",
            ],
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_core", "--parallel"],
            check=True,
        )

        built = sorted((build_dir / "bindings").glob("_core*.so"))
        if not built:
            raise RuntimeError("CMake build produced no _core extension")
        shutil.copy2(built[-1], out_path)

    @staticmethod
    def _pybind11_dir():
        import pybind11

        return pybind11.get_cmake_dir()


setup(
    ext_modules=[CMakeExtension("hdlagent._core")],
    cmdclass={"build_ext": CMakeBuild},
)
