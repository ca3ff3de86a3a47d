from pathlib import Path

import pytest

from namesieve import (FieldModel, build_clusters, build_matrix,
                       close_distances, parse_export_file)

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir():
    return DATA_DIR


@pytest.fixture(scope="session")
def model():
    return FieldModel()


@pytest.fixture(scope="session")
def garcia_corpus():
    return parse_export_file(DATA_DIR / "garcia.txt")


@pytest.fixture(scope="session")
def garcia_matrix(garcia_corpus, model):
    return close_distances(build_matrix(garcia_corpus, model))


@pytest.fixture(scope="session")
def garcia_clusters(garcia_matrix, garcia_corpus):
    return build_clusters(garcia_matrix, garcia_corpus)
