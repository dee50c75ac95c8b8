from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "rsac._core",
    [
        "python/rsac_module.cpp",
        "src/model.cpp",
        "src/first_passage.cpp",
        "src/average_solver.cpp",
        "src/simulator.cpp",
        "src/json_io.cpp",
    ],
    include_dirs=["include", "vendor", "/usr/include/eigen3"],
    define_macros=[("FMT_HEADER_ONLY", "1")],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
