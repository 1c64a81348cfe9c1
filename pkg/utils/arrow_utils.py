"""
Arrow serialization for result tables.
Schemas are pinned so identical runs produce identical columns and types.
"""

from pathlib import Path
from typing import Optional

import pandas as pd
import pyarrow as pa
import pyarrow.parquet as pq

IPC_BATCH_ROWS = 50000

# Pre-defined schemas for tables with a fixed column layout
SCHEMAS = {
    'entropy_curve': pa.schema([
        ('theta', pa.float64()),
        ('sigma', pa.float64()),
    ]),
    'spectrum': pa.schema([
        ('lambda', pa.float64()),
        ('density', pa.float64()),
    ]),
    'spectrum_moments': pa.schema([
        ('k', pa.int64()),
        ('quadrature', pa.float64()),
        ('closed_form', pa.float64()),
    ]),
    'saddle_ode': pa.schema([
        ('t', pa.float64()),
        ('x1', pa.float64()),
        ('x2', pa.float64()),
        ('z1', pa.float64()),
        ('y1', pa.float64()),
        ('y2', pa.float64()),
        ('w1', pa.float64()),
        ('invariant_A', pa.float64()),
        ('invariant_Abar', pa.float64()),
    ]),
    'saddle_closed_form': pa.schema([
        ('t', pa.float64()),
        ('x1', pa.float64()),
        ('x2', pa.float64()),
        ('z1', pa.float64()),
    ]),
    'quasi_entropy': pa.schema([
        ('order', pa.int64()),
        ('theta', pa.float64()),
        ('value', pa.float64()),
        ('extensive', pa.float64()),
        ('subleading', pa.float64()),
        ('cyclic_only', pa.float64()),
    ]),
    'simulate': pa.schema([
        ('mu', pa.float64()),
        ('t', pa.float64()),
        ('mean_entropy', pa.float64()),
        ('stderr', pa.float64()),
    ]),
}


def schema_for(name: str, frame: pd.DataFrame) -> pa.Schema:
    """
    Pinned schema when one exists; tables with a variable number of columns
    (phase scans, Renyi-order columns) get their schema from the frame.
    """
    schema = SCHEMAS.get(name)
    if schema is not None and list(frame.columns) == schema.names:
        return schema
    return pa.Schema.from_pandas(frame, preserve_index=False)


def dataframe_to_arrow(frame: pd.DataFrame, name: str) -> pa.Table:
    return pa.Table.from_pandas(frame, schema=schema_for(name, frame), preserve_index=False)


def write_ipc_stream(table: pa.Table, target: Path) -> Path:
    """
    Stream a result table to an uncompressed Arrow IPC file.

    Long trajectory and ODE tables are split into record batches of
    IPC_BATCH_ROWS rows; readers see one stream either way.
    """
    with pa.OSFile(str(target), 'wb') as sink:
        with pa.ipc.new_stream(sink, table.schema) as writer:
            for batch in table.to_batches(max_chunksize=IPC_BATCH_ROWS):
                writer.write_batch(batch)
    return target


def write_table(frame: pd.DataFrame, name: str, path: Path, fmt: str) -> Optional[Path]:
    """
    Write the frame as Arrow IPC (.arrow) or Parquet (.parquet) next to its CSV.

    Returns:
        The written path, or None for formats handled elsewhere (csv)
    """
    if fmt == 'csv':
        return None
    table = dataframe_to_arrow(frame, name)
    if fmt == 'arrow':
        return write_ipc_stream(table, path.with_suffix('.arrow'))
    if fmt == 'parquet':
        target = path.with_suffix('.parquet')
        pq.write_table(table, target)
        return target
    raise ValueError(f"Unknown output format: {fmt}")
