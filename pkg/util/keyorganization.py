class ReceiverLogKeys:
    def __init__(self, baseKey: str) -> None:
        self.baseKey = baseKey
        self.snrKey = baseKey + "/snrDb"
        self.nmseKey = baseKey + "/nmseDb"
        self.serKey = baseKey + "/ser"
        self.iterationsKey = baseKey + "/iterations"
        self.flopsKey = baseKey + "/flops"
        self.failedKey = baseKey + "/failed"
