import sys
from pathlib import Path
import pdoc.cli
from markdown_it import MarkdownIt

# Output dir (/docs)
OUTPUTDIR = Path('docs')

# Included modules
MODULES = [
    'MeshFlow'
]

# Markdown renderer
mdHTML = MarkdownIt(
    'commonmark',
    {
        'html': True,
        'linkify': True,
        'typographer': True,
    }
).enable('table')

# Index
indexHTML = \
r'''
<!DOCTYPE html>
<html>
<head>
    <meta charset='UTF-8'>
    <title>MeshFlow Docs</title>
    <style>
        body {
            background-color: #0d1117;
            color: white;
            font-family: -apple-system,
                        BlinkMacSystemFont,
                        "Segoe UI",
                        Helvetica,
                        Arial,
                        sans-serif;
            padding: 10px 20px 10px 20px
        }

        a {
            color: #58a6ff;
        }

        pre, code {
            background-color: #161b22;
            border-radius: 2px;
            padding: 1em 1em;
        }

        table {
            border-collapse: collapse;
        }

        th, td {
            border: 1px solid #30363d;
            padding: 4px 10px;
        }

        .navbar a {
            color: #c9d1d9;
            text-decoration: none;
            padding: 8px 12px;
        }
    </style>
</head>
<body>
    <nav class="navbar">
        <a href="MeshFlow/index.html">API reference</a>
    </nav>

    %readme%
</body>
</html>
'''

# Writes the index page with the readme rendered in it
def index() -> None:
    readmeHTML = mdHTML.render(Path('README.md').read_text(encoding='utf-8'))
    indexPath = OUTPUTDIR / 'index.html'
    indexPath.write_text(indexHTML.replace(r'%readme%', readmeHTML), encoding='utf-8')

def main():
    # Set args to pdoc main
    sys.argv = [
        'pdoc',
        '--html',
        '--force',
        '--output-dir', str(OUTPUTDIR),
        *MODULES
    ]

    pdoc.cli.main()

    # Write index
    index()

# Entry point
if __name__ == '__main__':
    main()
