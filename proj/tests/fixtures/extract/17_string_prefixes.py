raw = r'def raw_fake(): pass'
blob = b"def bytes_fake(): pass"
both = rb'class RawBytes: pass'
pattern = R"class AlsoRaw\(object\):"
template = f"def fmt_fake_{raw}(): pass"


def genuine():
    return (raw, blob, both, pattern, template)
