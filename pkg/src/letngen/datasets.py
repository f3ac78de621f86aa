"""Registry of the public SocioPatterns contact datasets.

The files are not bundled; download them from http://www.sociopatterns.org
(Datasets section) and drop them into a data directory (plain or gzipped).
``find_dataset`` locates a dataset by any of its known filenames. Published
reference statistics are included so ingestion can be sanity-checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class DatasetSpec:
    key: str
    title: str
    contacts: tuple[str, ...]          # known filenames, first match wins
    format: str                        # triples | triples_with_labels
    metadata: tuple[str, ...] = ()     # optional side file with node labels
    participants: int = 0              # published reference values
    unique_labels: int = 0
    interactions: int = 0


REGISTRY: dict[str, DatasetSpec] = {
    spec.key: spec for spec in (
        DatasetSpec(
            key="primary_school",
            title="Primary School",
            contacts=("primaryschool.csv",),
            format="triples_with_labels",
            metadata=("metadata_primaryschool.txt",),
            participants=242, unique_labels=6, interactions=125773,
        ),
        DatasetSpec(
            key="high_school_2011",
            title="High School 2011",
            contacts=("thiers_2011.csv",),
            format="triples_with_labels",
            participants=126, unique_labels=4, interactions=28561,
        ),
        DatasetSpec(
            key="high_school_2012",
            title="High School 2012",
            contacts=("thiers_2012.csv",),
            format="triples_with_labels",
            participants=180, unique_labels=5, interactions=45047,
        ),
        DatasetSpec(
            key="high_school_2013",
            title="High School 2013",
            contacts=("High-School_data_2013.csv",),
            format="triples_with_labels",
            metadata=("metadata_2013.txt",),
            participants=327, unique_labels=9, interactions=188508,
        ),
        DatasetSpec(
            key="hospital",
            title="Hospital",
            contacts=("detailed_list_of_contacts_Hospital.dat",),
            format="triples_with_labels",
            participants=75, unique_labels=4, interactions=32424,
        ),
        DatasetSpec(
            key="workplace_2013",
            title="Workplace 2013",
            contacts=("tij_InVS.dat",),
            format="triples",
            metadata=("metadata_InVS13.txt",),
            participants=92, unique_labels=5, interactions=9827,
        ),
        DatasetSpec(
            key="workplace_2015",
            title="Workplace 2015",
            contacts=("tij_InVS15.dat",),
            format="triples",
            metadata=("metadata_InVS15.dat", "metadata_InVS15.txt"),
            participants=217, unique_labels=12, interactions=78249,
        ),
    )
}


def _find_file(directory: Path, names: tuple[str, ...]) -> Path | None:
    for name in names:
        for candidate in (directory / name, directory / (name + ".gz")):
            if candidate.exists():
                return candidate
    return None


def find_dataset(key: str, directory: str | Path,
                 ) -> tuple[Path, Path | None] | None:
    """(contacts path, metadata path or None), or None if not downloaded."""
    spec = REGISTRY[key]
    directory = Path(directory)
    contacts = _find_file(directory, spec.contacts)
    if contacts is None:
        return None
    meta = _find_file(directory, spec.metadata) if spec.metadata else None
    return contacts, meta
