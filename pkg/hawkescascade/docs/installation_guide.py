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

# Installation Guide

hawkescascade needs Python 3.10 or newer and depends on numpy, scipy and pdoc only. numpy is pinned below 2.0, so installing hawkescascade into an environment that already holds numpy 2.x downgrades numpy; use a dedicated virtual environment if other packages need numpy 2.

## From PyPI

1. Create and activate a virtual environment: `python3 -m venv hc-env` followed by `source hc-env/bin/activate` (on Windows, `hc-env\Scripts\activate`)
2. Install the library via: `pip install hawkescascade`
3. Optionally, verify the installation via: `hawkescascade-test`. The statistical test suites draw thousands of replications and take a few minutes

## From a source checkout

1. Clone the repository and change into its root directory (the one holding `pyproject.toml`)
2. Install in editable mode via: `pip install -e .`
3. The bundled configurations in `hawkescascade/configs` are installed as package data, so `hawkescascade simulate --config fig1` works from any directory

## First run

```
hawkescascade simulate --config fig1 --out fig1_output
```

This writes `events.csv`, `trajectory.csv`, `report.txt` and `manifest.txt` into `fig1_output`. Running the same command twice rewrites identical files, and `--seed N` selects another realisation.

## Building this documentation

The pages are rendered with pdoc: `pdoc hawkescascade -o docs_html`.

"""
