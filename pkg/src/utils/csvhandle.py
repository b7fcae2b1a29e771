from typing import Iterable

import pandas as pd

from src.core.harbourne.tspace import TVector, combinatorial_quotient
from src.core.pipeline import TableResult
from src.utils.constants import AUDIT_HEAD, LISTING_HEAD, TABLE_HEAD


def listing_df(tvectors: Iterable[TVector]) -> pd.DataFrame:
    rows = []
    for tv in tvectors:
        q = combinatorial_quotient(tv)
        rows.append((tv.encode(), q.exact, q.decimal))
    return pd.DataFrame(rows, columns=LISTING_HEAD)


def table_df(result: TableResult) -> pd.DataFrame:
    rows = [
        (
            r.d,
            r.value.exact if r.value else "",
            r.value.decimal if r.value else "",
            r.witness or "",
        )
        for r in result.rows
    ]
    return pd.DataFrame(rows, columns=TABLE_HEAD)


def audit_df(result: TableResult) -> pd.DataFrame:
    rows = [
        (r.d, c.tvector.encode(), c.q.exact, c.status, c.criterion or c.certificate or c.detail)
        for r in result.rows
        for c in r.audit
    ]
    return pd.DataFrame(rows, columns=AUDIT_HEAD)


def to_csv_text(df: pd.DataFrame) -> str:
    return df.to_csv(index=False, lineterminator="\n")
