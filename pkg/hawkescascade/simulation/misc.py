########################################################################################################################
# Copyright 2024 the authors (see AUTHORS file for full list).                                                         #
#                                                                                                                      #
# This file is part of hawkescascade.                                                                                  #
#                                                                                                                      #
# Hawkescascade is free software: you can redistribute it and/or modify it under the terms of the GNU Lesser General   #
# Public License as published by the Free Software Foundation, either version 2.1 of the License, or (at your option)  #
# any later version.                                                                                                   #
#                                                                                                                      #
# Hawkescascade is distributed in the hope that it will be useful, but WITHOUT ANY WARRANTY; without even the implied  #
# warranty of MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the GNU Lesser General Public License for more  #
# details.                                                                                                             #
#                                                                                                                      #
# You should have received a copy of the GNU Lesser General Public License along with hawkescascade. If not, see       #
# <https://www.gnu.org/licenses/>.                                                                                     #
########################################################################################################################

r"""
This module holds the output side of the command line interface: CSV tables, key=value reports and the run manifest. Every file is a deterministic function of its inputs (no timestamps), so identical configurations and seeds give byte-identical output directories.
"""

from dataclasses import dataclass, field
import hashlib
import os

import numpy as np

__all__ = [
    'AnalysisResult',
    'write_csv',
    'write_report',
    'write_manifest',
    'emit_report',
]


@dataclass
class AnalysisResult:
    r"""
    Everything a subcommand produced.

    Parameters
    ----------
    * subcommand: str
        * Name of the subcommand that ran
    * passed: bool
        * False if any assertion of the subcommand failed
    * report: dict
        * Scalar results, written as key=value lines to report.txt
    * tables: dict
        * File name -> (array, column names), written as CSV files

    """
    subcommand: str
    passed: bool = True
    report: dict = field(default_factory = dict)
    tables: dict = field(default_factory = dict)


def _format(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, np.ndarray):
        return repr(value.tolist())
    return str(value)

def write_csv(path: str, table: np.ndarray, columns: list[str]) -> None:
    r"""
    Write a table with a header row, full double precision and no comment prefix.

    Parameters
    ----------
    * path: str
        * Output file
    * table: np.ndarray
        * 2D array whose width matches `columns`
    * columns: list[str]
        * Column names, in order

    """
    table = np.asarray(table, dtype = float).reshape(-1, len(columns))
    np.savetxt(path, table, delimiter = ',', header = ','.join(columns), comments = '', fmt = '%.17g')

def write_report(path: str, report: dict) -> None:
    r"""
    Write one key=value line per entry, in insertion order.
    """
    with open(path, 'w') as fh:
        for key, value in report.items():
            fh.write(f'{key}={_format(value)}\n')

def write_manifest(path: str, config_text: str, seed: int, subcommand: str, version: str) -> str:
    r"""
    Write the run manifest and return the SHA-256 of the serialized configuration.
    """
    digest = hashlib.sha256(config_text.encode('utf-8')).hexdigest()
    write_report(path, {'config_sha256': digest, 'seed': int(seed), 'subcommand': subcommand, 'version': version})

    return digest

def emit_report(result: AnalysisResult, output_dir: str, config_text: str, seed: int, version: str, verbose: bool = True) -> list[str]:
    r"""
    Write the tables, report.txt and manifest.txt of one analysis into output_dir.

    Parameters
    ----------
    * result: AnalysisResult
    * output_dir: str
        * Created if it does not exist
    * config_text: str
        * The serialized configuration, hashed into the manifest
    * seed: int
    * version: str
        * Library version recorded in the manifest
    * verbose: bool, optional
        * True (default) to print the written files

    Returns
    -------
    * files: list[str]
        * Paths of the written files

    """
    try:
        os.makedirs(output_dir, exist_ok = True)
    except OSError as err:
        raise RuntimeError(f"Output directory '{output_dir}' cannot be created: {err}") from err

    files = []
    for name, (table, columns) in result.tables.items():
        path = os.path.join(output_dir, name)
        write_csv(path, table, columns)
        files.append(path)

    report = {'subcommand': result.subcommand, 'passed': result.passed}
    report.update(result.report)
    write_report(os.path.join(output_dir, 'report.txt'), report)
    files.append(os.path.join(output_dir, 'report.txt'))

    write_manifest(os.path.join(output_dir, 'manifest.txt'), config_text, seed, result.subcommand, version)
    files.append(os.path.join(output_dir, 'manifest.txt'))

    if verbose:
        print(f"{len(files)} files saved to {output_dir}")

    return files
