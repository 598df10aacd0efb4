def format_float(value):
    """
    17 significant digits, enough for an exact round trip through text
    """
    return format(float(value), '.17g')

def format_cell(value):
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, int):
        return str(value)
    return format_float(value)

def float_list(values):
    return [float(v) for v in values]
