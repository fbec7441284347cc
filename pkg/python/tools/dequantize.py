from python.tools.to_weyl import ToWeyl


class Dequantize(ToWeyl):
    # the Wick symbol of an operator read back on the real side
    pass
