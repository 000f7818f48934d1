# SqueezeLab services package
