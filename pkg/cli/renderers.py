import csv
import io

from rest_framework.renderers import BaseRenderer, JSONRenderer


class CSVRenderer(BaseRenderer):
    """
    RFC 4180 CSV: CRLF line endings, minimal quoting, floats written as
    their shortest round-trip repr.
    """

    media_type = 'text/csv'
    format = 'csv'
    charset = 'utf-8'

    def render(self, data, accepted_media_type=None, renderer_context=None):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\r\n')
        writer.writerow(data['columns'])
        for row in data['rows']:
            writer.writerow([repr(float(value)) for value in row])
        return buffer.getvalue().encode(self.charset)


def render(data, fmt: str) -> str:
    if fmt == CSVRenderer.format:
        return CSVRenderer().render(data).decode('utf-8')
    rendered = JSONRenderer().render(data, renderer_context={'indent': 2})
    return rendered.decode('utf-8') + '\n'
